#include "polar/model_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "polar/errors.hpp"
#include "util.hpp"

namespace polar {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Cursor over one line; columns reported 1-based.
class LineCursor {
 public:
  LineCursor(std::string_view line, std::string source, std::size_t line_no)
      : s_(line), source_(std::move(source)), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected ") + what);
  }
  std::string ident() {
    skip_ws();
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected a name");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  double number() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    double v = 0.0;
    if (!detail::parse_double(s_.substr(start, pos_ - start), v)) {
      pos_ = start;
      fail("expected a number");
    }
    return v;
  }
  std::string_view rest() {
    skip_ws();
    return detail::trim(s_.substr(pos_));
  }
  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_no_; }
  const std::string& source() const { return source_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_, line_no_, pos_ + 1, msg); }
  [[noreturn]] void fail_at(std::size_t col, const std::string& msg) const {
    throw ParseError(source_, line_no_, col, msg);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::string source_;
  std::size_t line_no_;
};

/// Recursive-descent parser for polynomial expressions.
class ExprParser {
 public:
  ExprParser(LineCursor& c, const std::map<std::string, std::size_t>& vars) : c_(c), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    if (!c_.at_end()) c_.fail("unexpected '" + std::string(1, c_.peek()) + "'");
    return p;
  }

 private:
  std::size_t n() const { return vars_.size(); }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (c_.accept('+'))
        p = p + term();
      else if (c_.accept('-'))
        p = p - term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      if (c_.accept('*')) {
        p = p * unary();
      } else if (c_.peek() == '/') {
        const std::size_t col = c_.column();
        c_.accept('/');
        const Polynomial d = unary();
        if (d.degree() > 0) c_.fail_at(col, "non-polynomial expression: division by a non-constant");
        if (d.is_zero()) c_.fail_at(col, "division by zero");
        p = scale(p, 1.0 / d.constant_term());
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (c_.accept('-')) return -unary();
    if (c_.accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!c_.accept('^')) return base;
    const std::size_t col = c_.column();
    const double e = c_.number();
    if (e < 0 || e != std::floor(e) || e > 64) c_.fail_at(col, "non-polynomial expression: exponent must be a small non-negative integer");
    Polynomial r = Polynomial::constant(n(), 1.0);
    for (int i = 0; i < static_cast<int>(e); ++i) r = r * base;
    return r;
  }

  Polynomial primary() {
    const char ch = c_.peek();
    if (ch == '(') {
      c_.accept('(');
      Polynomial p = expr();
      c_.expect(')', "')'");
      return p;
    }
    if (is_ident_start(ch)) {
      const std::size_t col = c_.column();
      const std::string name = c_.ident();
      if (c_.peek() == '(') c_.fail_at(col, "non-polynomial expression: function '" + name + "' is not supported");
      const auto it = vars_.find(name);
      if (it == vars_.end()) c_.fail_at(col, "unknown identifier '" + name + "'");
      return Polynomial::variable(n(), it->second);
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return Polynomial::constant(n(), c_.number());
    if (ch == '\0') c_.fail("unexpected end of expression");
    c_.fail("unexpected '" + std::string(1, ch) + "'");
  }

  LineCursor& c_;
  const std::map<std::string, std::size_t>& vars_;
};

const std::set<std::string> kSections = {"states", "controls", "dynamics", "control_step", "init",
                                         "target", "property",  "check_at", "network"};

std::vector<std::string> parse_names(LineCursor& c) {
  std::vector<std::string> names;
  if (c.at_end()) return names;
  do names.push_back(c.ident());
  while (c.accept(','));
  if (!c.at_end()) c.fail("expected ',' between names");
  return names;
}

// `name in [lo, hi]`
std::pair<std::string, Interval> parse_bound(LineCursor& c) {
  std::pair<std::string, Interval> r;
  r.first = c.ident();
  const std::size_t col = c.column();
  if (c.ident() != "in") c.fail_at(col, "expected 'in'");
  c.expect('[', "'['");
  const double lo = c.number();
  c.expect(',', "','");
  const double hi = c.number();
  c.expect(']', "']'");
  if (!c.at_end()) c.fail("unexpected trailing text");
  if (lo > hi) c.fail_at(col, "empty interval: lower bound exceeds upper bound");
  r.second = Interval(lo, hi);
  return r;
}

struct Line {
  std::size_t no;
  std::string text;
};

IntervalVector assemble_box(const std::vector<std::pair<std::string, Interval>>& entries,
                            const std::vector<std::string>& states, const std::vector<std::size_t>& lines,
                            const std::string& source, const std::string& what, std::size_t header_line) {
  IntervalVector box(states.size());
  std::vector<bool> seen(states.size(), false);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto it = std::find(states.begin(), states.end(), entries[i].first);
    if (it == states.end())
      throw ParseError(source, lines[i], 1, "'" + entries[i].first + "' is not a state variable");
    const auto k = static_cast<std::size_t>(it - states.begin());
    if (seen[k]) throw ParseError(source, lines[i], 1, "duplicate bound for '" + entries[i].first + "'");
    seen[k] = true;
    box[k] = entries[i].second;
  }
  for (std::size_t k = 0; k < states.size(); ++k)
    if (!seen[k]) throw ParseError(source, header_line, 0, what + " is missing a bound for '" + states[k] + "'");
  return box;
}

bool same_target(const std::optional<TargetSpec>& a, const std::optional<TargetSpec>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->box == b->box && a->kind == b->kind && a->check_at == b->check_at;
}

}  // namespace

bool operator==(const ModelFile& a, const ModelFile& b) {
  return a.states == b.states && a.controls == b.controls && a.dynamics == b.dynamics &&
         a.control_step == b.control_step && a.init == b.init && same_target(a.property, b.property) &&
         a.network == b.network;
}

ModelFile parse_model(std::string_view text, const std::string& source) {
  // Split into sections: header line plus following non-header lines.
  struct Section {
    std::size_t line;
    std::string inline_text;
    std::vector<Line> body;
  };
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    const auto hash = raw.find('#');
    const std::string_view t = detail::trim(std::string_view(raw).substr(0, hash));
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon != std::string_view::npos) {
      const std::string key(detail::trim(t.substr(0, colon)));
      if (kSections.count(key)) {
        if (sections.count(key)) throw ParseError(source, no, 1, "duplicate section '" + key + "'");
        sections[key] = Section{no, std::string(detail::trim(t.substr(colon + 1))), {}};
        current = key;
        continue;
      }
    }
    if (current.empty()) throw ParseError(source, no, 1, "expected a section header such as 'states:'");
    sections[current].body.push_back(Line{no, std::string(t)});
  }

  auto require = [&](const std::string& key) -> Section& {
    const auto it = sections.find(key);
    if (it == sections.end()) throw ParseError(source, no + 1, 0, "missing section '" + key + ":'");
    return it->second;
  };
  auto single_value = [&](const std::string& key) -> LineCursor {
    Section& s = require(key);
    if (!s.body.empty()) throw ParseError(source, s.body.front().no, 1, "'" + key + ":' takes a single value on its own line");
    return LineCursor(s.inline_text, source, s.line);
  };
  auto no_inline = [&](const std::string& key, const Section& s) {
    if (!s.inline_text.empty())
      throw ParseError(source, s.line, 0, "'" + key + ":' entries go on the following lines");
  };

  ModelFile m;
  {
    Section& s = require("states");
    LineCursor c(s.inline_text, source, s.line);
    m.states = parse_names(c);
    if (m.states.empty()) throw ParseError(source, s.line, 0, "at least one state is required");
    if (!s.body.empty()) throw ParseError(source, s.body.front().no, 1, "state names go on the 'states:' line");
  }
  {
    Section& s = require("controls");
    LineCursor c(s.inline_text, source, s.line);
    m.controls = parse_names(c);
    if (!s.body.empty()) throw ParseError(source, s.body.front().no, 1, "control names go on the 'controls:' line");
  }
  std::map<std::string, std::size_t> vars;
  for (const auto& name : m.states)
    if (!vars.emplace(name, vars.size()).second) throw ParseError(source, require("states").line, 0, "duplicate name '" + name + "'");
  for (const auto& name : m.controls)
    if (!vars.emplace(name, vars.size()).second) throw ParseError(source, require("controls").line, 0, "duplicate name '" + name + "'");

  {
    Section& s = require("dynamics");
    no_inline("dynamics", s);
    std::vector<std::optional<Polynomial>> rhs(m.states.size());
    for (const Line& l : s.body) {
      LineCursor c(l.text, source, l.no);
      const std::size_t col = c.column();
      const std::string name = c.ident();
      c.expect('\'', "\"'\" after the variable name");
      c.expect('=', "'='");
      const auto it = std::find(m.states.begin(), m.states.end(), name);
      if (it == m.states.end()) {
        const bool is_control = std::find(m.controls.begin(), m.controls.end(), name) != m.controls.end();
        c.fail_at(col, is_control ? "control '" + name + "' is held constant and cannot have an equation"
                                  : "unknown state '" + name + "'");
      }
      const auto k = static_cast<std::size_t>(it - m.states.begin());
      if (rhs[k]) c.fail_at(col, "duplicate equation for '" + name + "'");
      rhs[k] = ExprParser(c, vars).parse();
    }
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      if (!rhs[k]) throw ParseError(source, s.line, 0, "no equation for state '" + m.states[k] + "'");
      m.dynamics.push_back(std::move(*rhs[k]));
    }
  }
  {
    LineCursor c = single_value("control_step");
    m.control_step = c.number();
    if (!c.at_end()) c.fail("unexpected trailing text");
    if (!(m.control_step > 0.0)) c.fail_at(1, "control step must be positive");
  }

  auto read_box = [&](const std::string& key) {
    Section& s = require(key);
    no_inline(key, s);
    std::vector<std::pair<std::string, Interval>> entries;
    std::vector<std::size_t> lines;
    for (const Line& l : s.body) {
      LineCursor c(l.text, source, l.no);
      entries.push_back(parse_bound(c));
      lines.push_back(l.no);
    }
    return assemble_box(entries, m.states, lines, source, "'" + key + ":'", s.line);
  };
  m.init = read_box("init");

  const bool has_target = sections.count("target") > 0;
  const bool has_property = sections.count("property") > 0;
  if (has_target != has_property) {
    const Section& s = has_target ? sections["target"] : sections["property"];
    throw ParseError(source, s.line, 0, "'target:' and 'property:' must be given together");
  }
  if (has_target) {
    TargetSpec spec;
    spec.box = read_box("target");
    LineCursor c = single_value("property");
    const std::size_t col = c.column();
    const std::string kind = c.ident();
    if (kind == "reach")
      spec.kind = PropertyKind::reach;
    else if (kind == "avoid")
      spec.kind = PropertyKind::avoid;
    else
      c.fail_at(col, "property must be 'reach' or 'avoid'");
    if (!c.at_end()) c.fail("unexpected trailing text");
    if (sections.count("check_at")) {
      LineCursor a = single_value("check_at");
      const std::size_t acol = a.column();
      const std::string when = a.ident();
      if (when == "final")
        spec.check_at = CheckAt::final_step;
      else if (when == "all")
        spec.check_at = CheckAt::all_steps;
      else
        a.fail_at(acol, "check_at must be 'final' or 'all'");
      if (!a.at_end()) a.fail("unexpected trailing text");
    }
    m.property = std::move(spec);
  } else if (sections.count("check_at")) {
    throw ParseError(source, sections["check_at"].line, 0, "'check_at:' requires a property");
  }

  {
    LineCursor c = single_value("network");
    m.network = std::string(c.rest());
    if (m.network.empty()) c.fail("expected a network file path");
  }
  return m;
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path.string());
}

std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : p.terms()) {
    double c = t.coef;
    if (first) {
      if (c < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      c = std::fabs(c);
    }
    first = false;
    std::string mono;
    for (std::size_t v = 0; v < p.num_vars(); ++v) {
      const unsigned e = t.monomial[v];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names.at(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += detail::format_double(c);
    else if (c == 1.0)
      out += mono;
    else
      out += detail::format_double(c) + "*" + mono;
  }
  return out;
}

std::string print_model(const ModelFile& m) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  auto box = [&](const IntervalVector& b) {
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i)
      s += "  " + m.states[i] + " in [" + detail::format_double(b[i].lo()) + ", " + detail::format_double(b[i].hi()) + "]\n";
    return s;
  };
  std::vector<std::string> names = m.states;
  names.insert(names.end(), m.controls.begin(), m.controls.end());

  std::string out = "states: " + join(m.states) + "\n";
  out += "controls: " + join(m.controls) + "\n";
  out += "dynamics:\n";
  for (std::size_t i = 0; i < m.dynamics.size(); ++i)
    out += "  " + m.states[i] + "' = " + format_polynomial(m.dynamics[i], names) + "\n";
  out += "control_step: " + detail::format_double(m.control_step) + "\n";
  out += "init:\n" + box(m.init);
  if (m.property) {
    out += "target:\n" + box(m.property->box);
    out += std::string("property: ") + (m.property->kind == PropertyKind::reach ? "reach" : "avoid") + "\n";
    if (m.property->check_at)
      out += std::string("check_at: ") + (*m.property->check_at == CheckAt::final_step ? "final" : "all") + "\n";
  }
  out += "network: " + m.network + "\n";
  return out;
}

NNCSModel build_model(const ModelFile& file, const std::filesystem::path& base_dir) {
  std::filesystem::path net_path(file.network);
  if (net_path.is_relative()) net_path = base_dir / net_path;
  NNCSModel model;
  model.state_names = file.states;
  model.control_names = file.controls;
  model.ode = PolynomialODE::with_static_inputs(file.dynamics, file.controls.size());
  model.net = load_network(net_path);
  model.control_step = file.control_step;
  model.init = file.init;
  model.validate();
  return model;
}

LoadedModel load_model(const std::filesystem::path& path) {
  LoadedModel r;
  r.file = read_model_file(path);
  r.model = build_model(r.file, path.parent_path());
  return r;
}

}  // namespace polar
