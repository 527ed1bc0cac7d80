#include "vcomp/bidlang.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "vcomp/errors.hpp"

namespace vcomp {

ParseError::ParseError(unsigned line, unsigned column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

enum class Tok { Word, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '.' || c == '/' || c == '-'; }

std::vector<Token> lex(std::string_view text, std::vector<std::string>& header) {
  std::vector<Token> out;
  unsigned line = 1;
  unsigned col = 1;
  bool seen_token = false;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t t = 0; t < k; ++t) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '#') {
      std::size_t end = text.find('\n', i);
      if (end == std::string_view::npos) end = text.size();
      if (!seen_token) {
        std::string_view body = text.substr(i + 1, end - i - 1);
        if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        header.emplace_back(body);
      }
      advance(end - i);
      continue;
    }
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    seen_token = true;
    if (c == '(' || c == ')' || c == '{' || c == '}' || c == ':' || c == ',') {
      out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), loc});
      advance(1);
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_char(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Word, std::string(text.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

const std::set<std::string> kKeywords{"items", "agent", "menu", "XS", "ADD", "TABLE", "OR", "XOR"};

bool valid_ident(const std::string& s) {
  if (s.empty() || kKeywords.count(s)) return false;
  for (unsigned char c : s) {
    if (!std::isalnum(c) && c != '_') return false;
  }
  return true;
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  InstanceFile file(std::vector<std::string> header) {
    InstanceFile inst;
    inst.header = std::move(header);
    expect_word("items");
    expect_punct(":");
    while (peek().kind == Tok::Word && peek().text != "agent") {
      const Token& t = next();
      if (!valid_ident(t.text)) fail(t, "invalid item name '" + t.text + "'");
      if (index_.count(t.text)) fail(t, "duplicate item '" + t.text + "'");
      if (inst.items.size() >= ItemSet::kMaxItems) fail(t, "too many items");
      index_[t.text] = static_cast<ItemIndex>(inst.items.size());
      inst.items.push_back(t.text);
    }
    if (inst.items.empty()) fail(peek(), "expected at least one item name");
    m_ = static_cast<unsigned>(inst.items.size());
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      expect_word("agent");
      const Token& name = next();
      if (name.kind != Tok::Word || !valid_ident(name.text)) fail(name, "expected agent name");
      if (!names.insert(name.text).second) fail(name, "duplicate agent '" + name.text + "'");
      expect_punct(":");
      AgentSpec agent{name.text, expr(), {}};
      if (peek().kind == Tok::Word && peek().text == "menu") {
        next();
        expect_punct(":");
        do {
          agent.menu.push_back(expr());
        } while (peek().kind == Tok::Word && peek().text != "agent");
      }
      inst.agents.push_back(std::move(agent));
    }
    if (inst.agents.empty()) fail(peek(), "expected at least one agent");
    return inst;
  }

private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.loc.line, t.loc.column, msg); }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  void expect_punct(const char* p) {
    const Token& t = next();
    if (t.kind != Tok::Punct || t.text != p) fail(t, std::string("expected '") + p + "'");
  }
  void expect_word(const char* w) {
    const Token& t = next();
    if (t.kind != Tok::Word || t.text != w) fail(t, std::string("expected '") + w + "'");
  }
  bool accept_punct(const char* p) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }

  ItemIndex item() {
    const Token& t = next();
    if (t.kind != Tok::Word) fail(t, "expected item name");
    auto it = index_.find(t.text);
    if (it == index_.end()) fail(t, "unknown item '" + t.text + "'");
    return it->second;
  }

  Money number() {
    const Token& t = next();
    if (t.kind != Tok::Word) fail(t, "expected number");
    if (!t.text.empty() && t.text.front() == '-') fail(t, "negative value");
    try {
      return Rational::parse(t.text);
    } catch (const OverflowError&) {
      fail(t, "value overflow in '" + t.text + "'");
    } catch (const std::invalid_argument&) {
      fail(t, "malformed number '" + t.text + "'");
    }
  }

  ValueFn expr() {
    const Token& head = next();
    if (head.kind != Tok::Word) fail(head, "expected XS, ADD, TABLE, OR or XOR");
    const SourceLoc loc = head.loc;
    try {
      if (head.text == "XS") {
        expect_punct("(");
        ItemIndex j = item();
        expect_punct(":");
        Money w = number();
        expect_punct(")");
        return ValueFn::xs(m_, j, w).with_location(loc);
      }
      if (head.text == "ADD") {
        expect_punct("(");
        std::vector<Money> w(m_);
        std::vector<bool> seen(m_, false);
        do {
          const Token& at = peek();
          ItemIndex j = item();
          if (seen[j]) fail(at, "item listed twice");
          seen[j] = true;
          expect_punct(":");
          w[j] = number();
        } while (accept_punct(","));
        expect_punct(")");
        return ValueFn::additive(std::move(w)).with_location(loc);
      }
      if (head.text == "TABLE") return table(loc);
      if (head.text == "OR" || head.text == "XOR") {
        expect_punct("(");
        std::vector<ValueFn> children;
        do {
          children.push_back(expr());
        } while (accept_punct(","));
        expect_punct(")");
        auto v = head.text == "OR" ? ValueFn::or_of(std::move(children)) : ValueFn::xor_of(std::move(children));
        return v.with_location(loc);
      }
    } catch (const ValidationError& e) {
      fail(head, e.what());
    } catch (const SizeGuardError& e) {
      fail(head, e.what());
    }
    fail(head, "expected XS, ADD, TABLE, OR or XOR, got '" + head.text + "'");
  }

  ValueFn table(SourceLoc loc) {
    if (m_ > kMaxTableItems) fail(toks_[pos_ - 1], "TABLE over too many items");
    expect_punct("(");
    std::map<std::uint64_t, std::pair<Money, SourceLoc>> given;
    do {
      const Token& open = peek();
      expect_punct("{");
      ItemSet s;
      while (peek().kind == Tok::Word) {
        const Token& at = peek();
        ItemIndex j = item();
        if (s.contains(j)) fail(at, "item listed twice");
        s = s.with(j);
      }
      expect_punct("}");
      expect_punct(":");
      Money v = number();
      if (given.count(s.bits())) fail(open, "bundle listed twice");
      given[s.bits()] = {v, open.loc};
    } while (accept_punct(","));
    expect_punct(")");

    if (auto it = given.find(0); it != given.end() && !it->second.first.is_zero()) {
      throw ParseError(it->second.second.line, it->second.second.column, "TABLE violates v({}) = 0");
    }
    const std::size_t size = std::size_t{1} << m_;
    std::vector<Money> values(size);
    // Closure over explicit entries; an explicit entry below one of its explicit subsets is rejected.
    for (std::uint64_t s = 1; s < size; ++s) {
      Money below;
      for (auto j : ItemSet{s}.items()) below = max(below, values[s & ~(std::uint64_t{1} << j)]);
      auto it = given.find(s);
      if (it == given.end()) {
        values[s] = below;
        continue;
      }
      if (it->second.first < below) {
        for (const auto& [t, entry] : given) {
          if ((t & s) == t && t != s && entry.first > it->second.first) {
            throw ParseError(it->second.second.line, it->second.second.column,
                             "non-monotone TABLE: v(" + render_set(ItemSet{t}, items_view()) + ") = " +
                                 entry.first.to_decimal_or_fraction() + " exceeds v(" +
                                 render_set(ItemSet{s}, items_view()) + ") = " +
                                 it->second.first.to_decimal_or_fraction());
          }
        }
      }
      values[s] = it->second.first;
    }
    try {
      return ValueFn::table(m_, std::move(values)).with_location(loc);
    } catch (const ValidationError& e) {
      throw ParseError(loc.line, loc.column, e.what());
    }
  }

  std::vector<std::string> items_view() const {
    std::vector<std::string> names(m_);
    for (const auto& [name, j] : index_) names[j] = name;
    return names;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, ItemIndex> index_;
  unsigned m_ = 0;
};

std::string num(const Money& v) { return v.to_decimal_or_fraction(); }

}  // namespace

InstanceFile parse_instance(std::string_view text) {
  std::vector<std::string> header;
  auto tokens = lex(text, header);
  return Parser(std::move(tokens)).file(std::move(header));
}

std::string render_set(ItemSet s, const std::vector<std::string>& items) {
  std::string out = "{";
  bool first = true;
  for (auto j : s.items()) {
    if (!first) out += ' ';
    out += items.at(j);
    first = false;
  }
  return out + "}";
}

std::string render_expr(const ValueFn& v, const std::vector<std::string>& items) {
  auto additive = [&](std::span<const Money> w) {
    std::string out = "ADD(";
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j) out += ", ";
      out += items.at(j) + ":" + num(w[j]);
    }
    return out + ")";
  };
  switch (v.repr()) {
    case Repr::Xs:
      return "XS(" + items.at(v.xs_item()) + ":" + num(v.xs_weight()) + ")";
    case Repr::Additive:
      return additive(v.additive_weights());
    case Repr::XosClauses: {
      std::string out = "XOR(";
      for (std::size_t k = 0; k < v.clauses().size(); ++k) {
        if (k) out += ", ";
        out += additive(v.clauses()[k]);
      }
      return out + ")";
    }
    case Repr::Or:
    case Repr::Xor: {
      std::string out = v.repr() == Repr::Or ? "OR(" : "XOR(";
      for (std::size_t k = 0; k < v.children().size(); ++k) {
        if (k) out += ", ";
        out += render_expr(v.children()[k], items);
      }
      return out + ")";
    }
    case Repr::Table: {
      const auto t = v.table_values();
      std::string out = "TABLE(";
      bool first = true;
      for (std::uint64_t s = 1; s < t.size(); ++s) {
        Money below;
        for (auto j : ItemSet{s}.items()) below = max(below, t[s & ~(std::uint64_t{1} << j)]);
        if (t[s] > below) {
          if (!first) out += ", ";
          out += render_set(ItemSet{s}, items) + ":" + num(t[s]);
          first = false;
        }
      }
      if (first) out += "{}:0";
      return out + ")";
    }
  }
  throw InternalError("unknown representation");
}

std::string render_instance(const InstanceFile& inst) {
  std::ostringstream os;
  for (const auto& h : inst.header) os << "# " << h << "\n";
  os << "items:";
  for (const auto& name : inst.items) os << ' ' << name;
  os << "\n";
  for (const auto& agent : inst.agents) {
    os << "agent " << agent.name << ": " << render_expr(agent.valuation, inst.items) << "\n";
    if (!agent.menu.empty()) {
      os << "  menu:\n";
      for (const auto& b : agent.menu) os << "    " << render_expr(b, inst.items) << "\n";
    }
  }
  return os.str();
}

}  // namespace vcomp
