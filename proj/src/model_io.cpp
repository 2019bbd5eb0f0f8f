#include "ybmarkov/model_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace ybmarkov {

TwoSiteMap ModelSpec::bulk_map() const {
  switch (kind) {
    case Kind::TwistedSsep: return swap_map(n);
    case Kind::Lyubashenko: return lyubashenko_map(*g);
    case Kind::Family: return general_map(*family);
  }
  throw std::logic_error("unknown model kind");
}

int ModelSpec::length(std::optional<int> override_length) const {
  if (override_length) return *override_length;
  if (L) return *L;
  throw std::invalid_argument("model has no lattice length; pass one explicitly");
}

RateMatrix ModelSpec::generator(std::optional<int> length_override) const {
  const int len = length(length_override);
  const TwoSiteMap m = bulk_map();
  if (kind != Kind::TwistedSsep) {
    if (!check_involutive(m, 1).passed()) throw std::domain_error("bulk map is not involutive");
    if (!check_braided_ybe(m, 1).passed()) throw std::domain_error("bulk map violates the braided Yang-Baxter equation");
  }
  if (twist) return twisted_set_theoretical_markov(m, len, *twist);
  return set_theoretical_markov(m, len);
}

std::string ModelSpec::kind_name() const {
  switch (kind) {
    case Kind::TwistedSsep: return "twisted_ssep";
    case Kind::Lyubashenko: return "lyubashenko";
    case Kind::Family: return "family";
  }
  return "?";
}

namespace {

struct Pos {
  int line = 1;
  int column = 1;
};

struct RawPerm {
  std::string text;
  Pos pos;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ModelSpec run() {
    parse_items(false);
    return resolve();
  }

 private:
  std::string_view text_;
  std::size_t at_ = 0;
  Pos pos_;

  std::optional<std::pair<int, Pos>> n_, L_;
  std::optional<RawPerm> lyub_, twist_;
  std::optional<std::pair<std::vector<RawPerm>, Pos>> g_, f_;
  std::optional<Pos> family_pos_;
  std::map<std::string, Pos> seen_;

  [[noreturn]] void fail(const std::string& msg, Pos p) const { throw ParseError(msg, p.line, p.column); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  bool done() const { return at_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[at_]; }

  char get() {
    const char c = text_[at_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  // Whitespace and comments; `separators` also skips ';'.
  void skip(bool separators) {
    while (!done()) {
      const char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c)) || (separators && c == ';')) {
        get();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip(false);
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void parse_items(bool in_block) {
    while (true) {
      skip(true);
      if (done()) {
        if (in_block) fail("unterminated family block");
        return;
      }
      if (peek() == '}') {
        if (!in_block) fail("unexpected '}'");
        get();
        return;
      }
      parse_item(in_block);
    }
  }

  void parse_item(bool in_block) {
    const Pos key_pos = pos_;
    std::string key;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) key += get();
    if (key.empty()) fail(std::string("expected a key, found '") + peek() + "'");
    if (in_block && key != "g" && key != "f") fail("only g and f may appear inside a family block", key_pos);
    if (!seen_.emplace(key == "n" ? "N" : key, key_pos).second) fail("duplicate key '" + key + "'", key_pos);

    skip(false);
    if (key == "family") {
      if (peek() == '=' || peek() == ':') get();
      expect('{');
      family_pos_ = key_pos;
      parse_items(true);
      return;
    }
    if (peek() != '=' && peek() != ':') fail("expected '=' or ':' after '" + key + "'");
    get();
    skip(false);

    if (key == "N" || key == "n") n_ = {parse_int(), key_pos};
    else if (key == "L") L_ = {parse_int(), key_pos};
    else if (key == "lyubashenko") lyub_ = parse_perm();
    else if (key == "twist") twist_ = parse_perm();
    else if (key == "g") g_ = {parse_perm_list(), key_pos};
    else if (key == "f") f_ = {parse_perm_list(), key_pos};
    else fail("unknown key '" + key + "'", key_pos);
  }

  int parse_int() {
    const Pos p = pos_;
    std::string digits;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
    if (digits.empty()) fail("expected a positive integer");
    if (digits.size() > 6) fail("integer too large", p);
    const int v = std::stoi(digits);
    if (v < 1) fail("expected a positive integer", p);
    return v;
  }

  // Raw text of one permutation literal; validated once N is known.
  RawPerm parse_perm() {
    skip(false);
    RawPerm raw{"", pos_};
    if (peek() == '"') {
      get();
      while (!done() && peek() != '"' && peek() != '\n') raw.text += get();
      if (peek() != '"') fail("unterminated string", raw.pos);
      get();
    } else if (peek() == '[') {
      while (!done() && peek() != ']' && peek() != '\n') raw.text += get();
      if (peek() != ']') fail("unterminated '['", raw.pos);
      raw.text += get();
    } else if (peek() == '(') {
      while (peek() == '(') {
        while (!done() && peek() != ')' && peek() != '\n') raw.text += get();
        if (peek() != ')') fail("unterminated '('", raw.pos);
        raw.text += get();
        // Further cycles may follow after spaces on the same line.
        std::size_t look = at_;
        while (look < text_.size() && (text_[look] == ' ' || text_[look] == '\t')) ++look;
        if (look < text_.size() && text_[look] == '(') {
          while (at_ < look) get();
        }
      }
    } else {
      fail("expected a permutation");
    }
    return raw;
  }

  std::vector<RawPerm> parse_perm_list() {
    expect('[');
    std::vector<RawPerm> out;
    skip(false);
    if (peek() == ']') {
      get();
      return out;
    }
    while (true) {
      out.push_back(parse_perm());
      skip(false);
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() == ']') {
        get();
        return out;
      }
      fail("expected ',' or ']' in permutation list");
    }
  }

  Permutation resolve_perm(const RawPerm& raw, int n) const {
    try {
      Permutation p = Permutation::parse(raw.text, n);
      if (p.size() != n) fail("permutation '" + raw.text + "' is not on {0.." + std::to_string(n - 1) + "}", raw.pos);
      return p;
    } catch (const std::invalid_argument& e) {
      fail(std::string("invalid permutation '") + raw.text + "': " + e.what(), raw.pos);
    }
  }

  std::vector<Permutation> resolve_list(const std::pair<std::vector<RawPerm>, Pos>& raw, int n,
                                        const char* name) const {
    if (static_cast<int>(raw.first.size()) != n)
      fail(std::string(name) + " lists " + std::to_string(raw.first.size()) + " permutations, expected N = " +
               std::to_string(n),
           raw.second);
    std::vector<Permutation> out;
    for (const auto& r : raw.first) out.push_back(resolve_perm(r, n));
    return out;
  }

  ModelSpec resolve() const {
    if (!n_) fail("missing N", Pos{1, 1});
    ModelSpec spec;
    spec.n = n_->first;
    if (L_) spec.L = L_->first;
    const bool has_family = g_ || f_ || family_pos_;
    if (lyub_ && has_family) fail("a model cannot be both lyubashenko and family", lyub_->pos);
    if (lyub_) {
      spec.kind = ModelSpec::Kind::Lyubashenko;
      spec.g = resolve_perm(*lyub_, spec.n);
    } else if (has_family) {
      const Pos where = family_pos_ ? *family_pos_ : (g_ ? g_->second : f_->second);
      if (!g_ || !f_) fail("a family needs both g and f", where);
      spec.kind = ModelSpec::Kind::Family;
      SolutionFamily fam{spec.n, resolve_list(*g_, spec.n, "g"), resolve_list(*f_, spec.n, "f")};
      try {
        general_map(fam);
      } catch (const std::invalid_argument& e) {
        fail(e.what(), where);
      }
      spec.family = std::move(fam);
    }
    if (twist_) spec.twist = resolve_perm(*twist_, spec.n);
    if (spec.kind == ModelSpec::Kind::TwistedSsep && !spec.twist) spec.twist = Permutation::identity(spec.n);
    return spec;
  }
};

std::string perm_list(const std::vector<Permutation>& ps) {
  std::string out = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].to_string();
  }
  return out + "]";
}

}  // namespace

ModelSpec parse_model(std::string_view text) { return Parser(text).run(); }

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string format_model(const ModelSpec& spec) {
  std::ostringstream out;
  out << "N = " << spec.n << '\n';
  if (spec.L) out << "L = " << *spec.L << '\n';
  switch (spec.kind) {
    case ModelSpec::Kind::TwistedSsep: break;
    case ModelSpec::Kind::Lyubashenko: out << "lyubashenko = " << spec.g->to_string() << '\n'; break;
    case ModelSpec::Kind::Family:
      out << "family {\n  g = " << perm_list(spec.family->g) << "\n  f = " << perm_list(spec.family->f) << "\n}\n";
      break;
  }
  if (spec.twist) out << "twist = " << spec.twist->to_string() << '\n';
  return out.str();
}

}  // namespace ybmarkov
