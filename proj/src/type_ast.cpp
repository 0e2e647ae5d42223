#include "hoq/type_ast.hpp"

#include "hoq/error.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace hoq {

// ---------------------------------------------------------------------------
// TypeExpr

TypeExpr TypeExpr::elementary(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InvalidArgument("elementary type with no atoms");
  for (const auto& a : atoms) {
    if (a.dim < 1) throw InvalidArgument("atom '" + a.label + "' has dimension < 1");
    if (a.label.empty()) throw InvalidArgument("atom with empty label");
  }
  return TypeExpr(std::move(atoms));
}

TypeExpr TypeExpr::atom(std::string label, int dim) {
  return elementary({Atom{std::move(label), dim}});
}

TypeExpr TypeExpr::trivial() { return elementary({Atom::trivial()}); }

TypeExpr TypeExpr::arrow(TypeExpr tail, TypeExpr head) {
  return TypeExpr(std::make_shared<const ArrowNode>(ArrowNode{std::move(tail), std::move(head)}));
}

const std::vector<Atom>& TypeExpr::atoms() const {
  if (!is_elementary()) throw InvalidArgument("atoms() on an arrow type");
  return std::get<std::vector<Atom>>(node_);
}

const TypeExpr& TypeExpr::tail() const {
  if (!is_arrow()) throw InvalidArgument("tail() on an elementary type");
  return std::get<std::shared_ptr<const ArrowNode>>(node_)->tail;
}

const TypeExpr& TypeExpr::head() const {
  if (!is_arrow()) throw InvalidArgument("head() on an elementary type");
  return std::get<std::shared_ptr<const ArrowNode>>(node_)->head;
}

bool TypeExpr::is_all_trivial_leaf() const {
  if (!is_elementary()) return false;
  for (const auto& a : atoms())
    if (!a.is_trivial()) return false;
  return true;
}

bool operator==(const TypeExpr& a, const TypeExpr& b) {
  if (a.is_elementary() != b.is_elementary()) return false;
  if (a.is_elementary()) return a.atoms() == b.atoms();
  const auto& pa = std::get<std::shared_ptr<const TypeExpr::ArrowNode>>(a.node_);
  const auto& pb = std::get<std::shared_ptr<const TypeExpr::ArrowNode>>(b.node_);
  if (pa == pb) return true;
  return pa->tail == pb->tail && pa->head == pb->head;
}

// ---------------------------------------------------------------------------
// TypeStructure

TypeStructure TypeStructure::leaf(Leaf kind) {
  TypeStructure s;
  s.kind_ = kind;
  return s;
}

TypeStructure TypeStructure::arrow(TypeStructure tail, TypeStructure head) {
  TypeStructure s;
  s.children_ = std::make_shared<const Children>(Children{std::move(tail), std::move(head)});
  return s;
}

TypeStructure::Leaf TypeStructure::leaf_kind() const {
  if (!is_leaf()) throw InvalidArgument("leaf_kind() on an arrow structure");
  return kind_;
}

const TypeStructure& TypeStructure::tail() const {
  if (is_leaf()) throw InvalidArgument("tail() on a leaf structure");
  return children_->tail;
}

const TypeStructure& TypeStructure::head() const {
  if (is_leaf()) throw InvalidArgument("head() on a leaf structure");
  return children_->head;
}

std::string TypeStructure::to_string() const {
  if (is_leaf()) return kind_ == Leaf::Star ? "*" : "I";
  auto wrap = [](const TypeStructure& s) {
    return s.is_leaf() ? s.to_string() : "(" + s.to_string() + ")";
  };
  return wrap(tail()) + "->" + wrap(head());
}

bool TypeStructure::admits(const TypeExpr& x) const {
  if (is_leaf()) {
    if (!x.is_elementary()) return false;
    return kind_ == Leaf::Star || x.is_all_trivial_leaf();
  }
  if (!x.is_arrow()) return false;
  return tail().admits(x.tail()) && head().admits(x.head());
}

bool operator==(const TypeStructure& a, const TypeStructure& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.kind_ == b.kind_;
  return a.tail() == b.tail() && a.head() == b.head();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TypeExpr parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty type", pos_);
    TypeExpr t = parse_type();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return t;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  TypeExpr parse_type() {
    TypeExpr tail = parse_term();
    if (accept("->")) return TypeExpr::arrow(std::move(tail), parse_type());
    return tail;
  }

  TypeExpr parse_term() {
    skip_ws();
    if (at_end()) throw ParseError("expected a type", pos_);
    if (accept("(")) {
      TypeExpr inner = parse_type();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return inner;
    }
    std::vector<Atom> atoms;
    atoms.push_back(parse_atom());
    while (accept("*")) atoms.push_back(parse_atom());
    return TypeExpr::elementary(std::move(atoms));
  }

  Atom parse_atom() {
    skip_ws();
    const std::size_t start = pos_;
    if (at_end()) throw ParseError("expected an atom", pos_);
    const char c = text_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      throw ParseError(std::string("unknown token '") + c + "'", pos_);
    }
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string label(text_.substr(start, pos_ - start));

    int dim = label == "I" ? 1 : 2;
    if (accept(":")) {
      skip_ws();
      const std::size_t num_start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (num_start == pos_) throw ParseError("expected an integer dimension", num_start);
      long long value = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + num_start, text_.data() + pos_, value);
      (void)ptr;
      if (ec != std::errc() || value > std::numeric_limits<int>::max())
        throw ParseError("dimension out of range", num_start);
      if (value < 1) throw ParseError("dimension annotation must be >= 1", num_start);
      dim = static_cast<int>(value);
      if (label == "I" && dim != 1) throw ParseError("the trivial system I has dimension 1", num_start);
    }
    if (dim == 1) return Atom::trivial();
    return Atom{std::move(label), dim};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_into(const TypeExpr& x, bool top, std::string& out) {
  if (x.is_elementary()) {
    bool first = true;
    for (const auto& a : x.atoms()) {
      if (!first) out += '*';
      first = false;
      if (a.is_trivial()) {
        out += 'I';
      } else {
        out += a.label;
        out += ':';
        out += std::to_string(a.dim);
      }
    }
    return;
  }
  if (!top) out += '(';
  print_into(x.tail(), false, out);
  out += "->";
  print_into(x.head(), false, out);
  if (!top) out += ')';
}

void collect_atoms(const TypeExpr& x, std::vector<Atom>& out) {
  if (x.is_elementary()) {
    out.insert(out.end(), x.atoms().begin(), x.atoms().end());
    return;
  }
  collect_atoms(x.tail(), out);
  collect_atoms(x.head(), out);
}

}  // namespace

TypeExpr parse_type(std::string_view text) { return Parser(text).parse(); }

std::string print_canonical(const TypeExpr& x) {
  std::string out;
  print_into(x, true, out);
  return out;
}

std::vector<Atom> factor_atoms(const TypeExpr& x) {
  std::vector<Atom> out;
  collect_atoms(x, out);
  return out;
}

FactorProfile factor_dims(const TypeExpr& x) {
  FactorProfile dims;
  for (const auto& a : factor_atoms(x)) dims.push_back(a.dim);
  return dims;
}

TypeExpr extend_by(const TypeExpr& x, const Atom& e) {
  if (x.is_elementary()) {
    auto atoms = x.atoms();
    atoms.push_back(e);
    return TypeExpr::elementary(std::move(atoms));
  }
  return TypeExpr::arrow(x.tail(), extend_by(x.head(), e));
}

TypeExpr bar(const TypeExpr& x) { return TypeExpr::arrow(x, TypeExpr::trivial()); }

TypeExpr tensor(const TypeExpr& x, const TypeExpr& y) { return bar(TypeExpr::arrow(x, bar(y))); }

TypeExpr make_comb(const std::vector<TypeExpr>& bases) {
  if (bases.empty()) throw InvalidArgument("make_comb needs at least one base");
  TypeExpr out = bases.front();
  for (std::size_t i = 1; i < bases.size(); ++i) out = TypeExpr::arrow(std::move(out), bases[i]);
  return out;
}

bool precedes(const TypeExpr& x, const TypeExpr& y) {
  if (!y.is_arrow()) return false;
  if (y.tail() == x || y.head() == x) return true;
  return precedes(x, y.tail()) || precedes(x, y.head());
}

TypeStructure natural_structure(const TypeExpr& x) {
  if (x.is_elementary()) {
    return TypeStructure::leaf(x.is_all_trivial_leaf() ? TypeStructure::Leaf::Trivial
                                                       : TypeStructure::Leaf::Star);
  }
  return TypeStructure::arrow(natural_structure(x.tail()), natural_structure(x.head()));
}

int depth(const TypeExpr& x) {
  if (x.is_elementary()) return 1;
  return 1 + std::max(depth(x.tail()), depth(x.head()));
}

std::vector<int> k_exponents(const TypeExpr& x) {
  // Counted on the printed word itself; see the header for the rule.
  const std::string word = print_canonical(x);
  std::vector<int> suffix_count(word.size() + 1, 0);
  for (std::size_t i = word.size(); i-- > 0;) {
    const bool arrow = word[i] == '-' && i + 1 < word.size() && word[i + 1] == '>';
    suffix_count[i] = suffix_count[i + 1] + (arrow || word[i] == '(' ? 1 : 0);
  }
  std::vector<int> out;
  std::size_t i = 0;
  while (i < word.size()) {
    const char c = word[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < word.size() && (std::isalnum(static_cast<unsigned char>(word[j])) || word[j] == '_' ||
                                 word[j] == ':'))
        ++j;
      out.push_back((suffix_count[j] + 1) % 2);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace hoq
