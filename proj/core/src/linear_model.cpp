#include "pdptwse/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "pdptwse/io.hpp"

namespace pdptwse {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxLine = 200;

std::string Num(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double Round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(Num(v).c_str(), nullptr);
}

const char* SenseText(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
  }
  return "=";
}

void AppendTerms(std::string& out, const std::vector<LinearTerm>& terms, const LinearModel& m,
                 std::size_t line_start) {
  for (const LinearTerm& t : terms) {
    std::string piece = t.coef < 0 ? " - " : " + ";
    piece += Num(std::abs(t.coef));
    piece += " ";
    piece += m.vars[t.var].name;
    if (out.size() - line_start + piece.size() > kMaxLine) {
      out += "\n  ";
      line_start = out.size() - 2;
    }
    out += piece;
  }
}

}  // namespace

int LinearModel::AddVar(std::string var_name, VarType type, double lower, double upper) {
  auto [it, inserted] = index_.emplace(var_name, static_cast<int>(vars.size()));
  if (!inserted) throw std::logic_error("duplicate variable " + var_name);
  vars.push_back({std::move(var_name), type, lower, upper});
  return it->second;
}

int LinearModel::FindVar(const std::string& var_name) const {
  auto it = index_.find(var_name);
  return it == index_.end() ? -1 : it->second;
}

void LinearModel::AddRow(LinearRow row) {
  std::sort(row.terms.begin(), row.terms.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  std::vector<LinearTerm> merged;
  for (const LinearTerm& t : row.terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const LinearTerm& t) { return t.coef == 0.0; });
  row.terms = std::move(merged);
  rows.push_back(std::move(row));
}

std::string WriteLp(const LinearModel& m) {
  std::string out;
  out += "\\ model " + (m.name.empty() ? std::string("unnamed") : m.name) + "\n";
  out += "Minimize\n obj:";
  std::size_t line_start = out.rfind('\n') + 1;
  if (m.objective.empty()) {
    out += " 0";
  } else {
    AppendTerms(out, m.objective, m, line_start);
  }
  out += "\nSubject To\n";
  for (const LinearRow& r : m.rows) {
    line_start = out.size();
    out += " " + r.name + ":";
    if (r.terms.empty()) {
      out += " 0 " + m.vars.front().name;
    } else {
      AppendTerms(out, r.terms, m, line_start);
    }
    out += " ";
    out += SenseText(r.sense);
    out += " " + Num(r.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const LinearVar& v : m.vars) {
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      out += " " + v.name + " free\n";
    } else {
      out += " " + Num(v.lower) + " <= " + v.name + " <= " + Num(v.upper) + "\n";
    }
  }
  bool any_binary = false;
  for (const LinearVar& v : m.vars) any_binary |= v.type == VarType::kBinary;
  if (any_binary) {
    out += "Binaries\n";
    for (const LinearVar& v : m.vars) {
      if (v.type == VarType::kBinary) out += " " + v.name + "\n";
    }
  }
  out += "End\n";
  return out;
}

namespace {

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kGenerals, kEnd };

bool IsSenseToken(const std::string& t) {
  return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "=<" || t == "=>";
}

Sense ParseSense(const std::string& t) {
  if (t == "<=" || t == "<" || t == "=<") return Sense::kLe;
  if (t == ">=" || t == ">" || t == "=>") return Sense::kGe;
  return Sense::kEq;
}

bool ParseNumber(const std::string& t, double& v) {
  std::string low;
  for (char c : t) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "inf" || low == "+inf" || low == "infinity" || low == "+infinity") {
    v = kInfinity;
    return true;
  }
  if (low == "-inf" || low == "-infinity") {
    v = -kInfinity;
    return true;
  }
  char* end = nullptr;
  v = std::strtod(t.c_str(), &end);
  return end != t.c_str() && *end == '\0';
}

// Splits on whitespace and isolates sense operators and signs.
std::vector<std::string> Tokenize(const std::string& text) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < text.size() && (text[i + 1] == '=' || text[i + 1] == '<' || text[i + 1] == '>')) {
        op += text[i + 1];
        ++i;
      }
      toks.push_back(op);
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '<' &&
             text[j] != '>' && text[j] != '=') {
        ++j;
      }
      toks.push_back(text.substr(i, j - i));
      i = j;
    }
  }
  return toks;
}

struct Parser {
  LinearModel model;
  std::map<std::string, int> temp_index;
  std::vector<std::string> bound_order;
  std::map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> binaries;

  int Var(const std::string& name) {
    auto it = temp_index.find(name);
    if (it != temp_index.end()) return it->second;
    const int id = model.AddVar(name, VarType::kContinuous, 0.0, kInfinity);
    temp_index[name] = id;
    return id;
  }

  // Parses "[name:] terms [sense rhs]".
  void ParseExpression(const std::vector<std::string>& toks, bool objective) {
    std::size_t p = 0;
    std::string row_name;
    if (!toks.empty() && toks[0].back() == ':') {
      row_name = toks[0].substr(0, toks[0].size() - 1);
      p = 1;
    } else if (toks.size() > 1 && toks[1] == ":") {
      row_name = toks[0];
      p = 2;
    }
    std::vector<LinearTerm> terms;
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    bool dangling = false;
    std::size_t q = p;
    for (; q < toks.size() && !IsSenseToken(toks[q]); ++q) {
      const std::string& t = toks[q];
      double v;
      if (t == "+" || t == "-") {
        if (dangling) throw LpFormatError("two operators in a row in '" + row_name + "'");
        sign = t == "+" ? 1.0 : -1.0;
        dangling = true;
      } else if (ParseNumber(t, v)) {
        coef = v;
        have_coef = true;
      } else {
        std::string name = t;
        double s = sign;
        if (name[0] == '+' || name[0] == '-') {
          if (name[0] == '-') s = -s;
          name = name.substr(1);
        }
        terms.push_back({Var(name), s * (have_coef ? coef : 1.0)});
        dangling = false;
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
      }
    }
    if (dangling) throw LpFormatError("operator without a term in '" + row_name + "'");
    if (objective) {
      if (have_coef && coef != 0.0) throw LpFormatError("objective constants are not supported");
      LinearRow tmp;
      tmp.terms = terms;
      model.AddRow(tmp);
      model.objective = model.rows.back().terms;
      model.rows.pop_back();
      return;
    }
    if (q + 2 != toks.size()) throw LpFormatError("constraint " + row_name + " lacks a sense and right-hand side");
    LinearRow row;
    row.name = row_name;
    row.terms = terms;
    row.sense = ParseSense(toks[q]);
    if (!ParseNumber(toks[q + 1], row.rhs)) throw LpFormatError("bad right-hand side in " + row_name);
    if (have_coef && coef != 0.0) throw LpFormatError("constant on the left-hand side of " + row_name);
    model.AddRow(std::move(row));
  }

  void ParseBound(const std::vector<std::string>& toks) {
    auto note = [&](const std::string& name) {
      if (!bounds.count(name)) {
        bound_order.push_back(name);
        bounds[name] = {0.0, kInfinity};
        Var(name);
      }
      return &bounds[name];
    };
    double a, b;
    if (toks.size() == 2 && (toks[1] == "free" || toks[1] == "Free" || toks[1] == "FREE")) {
      *note(toks[0]) = {-kInfinity, kInfinity};
    } else if (toks.size() == 5 && ParseNumber(toks[0], a) && ParseNumber(toks[4], b)) {
      *note(toks[2]) = {a, b};
    } else if (toks.size() == 3 && ParseNumber(toks[2], a)) {
      auto* bd = note(toks[0]);
      const Sense s = ParseSense(toks[1]);
      if (s == Sense::kLe) bd->second = a;
      if (s == Sense::kGe) bd->first = a;
      if (s == Sense::kEq) *bd = {a, a};
    } else if (toks.size() == 3 && ParseNumber(toks[0], a)) {
      auto* bd = note(toks[2]);
      const Sense s = ParseSense(toks[1]);
      if (s == Sense::kLe) bd->first = a;
      if (s == Sense::kGe) bd->second = a;
      if (s == Sense::kEq) *bd = {a, a};
    } else {
      throw LpFormatError("unrecognized bound line");
    }
  }
};

Section Header(const std::string& line) {
  std::string low;
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (low == "minimize" || low == "minimise" || low == "min") return Section::kObjective;
  if (low == "maximize" || low == "maximise" || low == "max") throw LpFormatError("maximization is not supported");
  if (low == "subjectto" || low == "st" || low == "s.t." || low == "such that") return Section::kConstraints;
  if (low == "bounds" || low == "bound") return Section::kBounds;
  if (low == "binaries" || low == "binary" || low == "bin") return Section::kBinaries;
  if (low == "generals" || low == "general" || low == "gen") return Section::kGenerals;
  if (low == "end") return Section::kEnd;
  return Section::kNone;
}

}  // namespace

LinearModel ReadLp(std::string_view text) {
  Parser parser;
  Section section = Section::kNone;
  std::vector<std::string> pending;
  bool pending_is_objective = false;
  bool seen_end = false;

  auto flush = [&]() {
    if (pending.empty()) return;
    parser.ParseExpression(pending, pending_is_objective);
    pending.clear();
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    const auto comment = raw.find('\\');
    std::string line = comment == std::string::npos ? raw : raw.substr(0, comment);
    const Section header = Header(line);
    if (header != Section::kNone) {
      flush();
      section = header;
      if (section == Section::kEnd) {
        seen_end = true;
        break;
      }
      continue;
    }
    const auto toks = Tokenize(line);
    if (toks.empty()) continue;
    switch (section) {
      case Section::kObjective:
        pending_is_objective = true;
        pending.insert(pending.end(), toks.begin(), toks.end());
        break;
      case Section::kConstraints: {
        // A line opening with "name:" starts a new row.
        const bool starts_row = toks[0].back() == ':' || (toks.size() > 1 && toks[1] == ":");
        if (starts_row || pending_is_objective) flush();
        pending_is_objective = false;
        pending.insert(pending.end(), toks.begin(), toks.end());
        if (pending.size() >= 2) {
          double v;
          if (IsSenseToken(pending[pending.size() - 2]) && ParseNumber(pending.back(), v)) flush();
        }
        break;
      }
      case Section::kBounds:
        flush();
        parser.ParseBound(toks);
        break;
      case Section::kBinaries:
      case Section::kGenerals:
        flush();
        for (const auto& t : toks) {
          if (section == Section::kGenerals) throw LpFormatError("general integers are not supported");
          parser.binaries.push_back(t);
          parser.Var(t);
        }
        break;
      default:
        throw LpFormatError("content outside any section");
    }
  }
  flush();
  if (!seen_end) throw LpFormatError("missing End");

  // Rebuild with variables in bounds-section order, then any others.
  LinearModel& tmp = parser.model;
  std::vector<std::string> order = parser.bound_order;
  std::map<std::string, bool> listed;
  for (const auto& nm : order) listed[nm] = true;
  for (const auto& v : tmp.vars) {
    if (!listed.count(v.name)) order.push_back(v.name);
  }
  std::map<std::string, bool> is_binary;
  for (const auto& b : parser.binaries) is_binary[b] = true;

  LinearModel out;
  std::vector<int> remap(tmp.vars.size());
  for (const auto& nm : order) {
    const bool bin = is_binary.count(nm) > 0;
    double lo = 0.0, hi = bin ? 1.0 : kInfinity;
    if (auto it = parser.bounds.find(nm); it != parser.bounds.end()) {
      lo = it->second.first;
      hi = it->second.second;
    }
    const int id = out.AddVar(nm, bin ? VarType::kBinary : VarType::kContinuous, lo, hi);
    remap[tmp.FindVar(nm)] = id;
  }
  for (const auto& t : tmp.objective) out.objective.push_back({remap[t.var], t.coef});
  std::sort(out.objective.begin(), out.objective.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  for (const auto& r : tmp.rows) {
    LinearRow row = r;
    for (auto& t : row.terms) t.var = remap[t.var];
    out.AddRow(std::move(row));
  }
  const auto first = text.find("\\ model ");
  if (first == 0) {
    const auto eol = text.find('\n');
    out.name = std::string(text.substr(8, eol - 8));
    if (out.name == "unnamed") out.name.clear();
  }
  return out;
}

void EmitLpText(const LinearModel& model, const std::string& path) { WriteFile(path, WriteLp(model)); }

double RowActivity(const LinearRow& row, const std::vector<double>& values) {
  double a = 0.0;
  for (const LinearTerm& t : row.terms) a += t.coef * values[t.var];
  return a;
}

double RowSlack(const LinearRow& row, const std::vector<double>& values) {
  const double a = RowActivity(row, values);
  switch (row.sense) {
    case Sense::kLe: return row.rhs - a;
    case Sense::kGe: return a - row.rhs;
    case Sense::kEq: return -std::abs(a - row.rhs);
  }
  return 0.0;
}

bool EquivalentModels(const LinearModel& a, const LinearModel& b) {
  if (a.vars.size() != b.vars.size() || a.rows.size() != b.rows.size()) return false;
  for (std::size_t v = 0; v < a.vars.size(); ++v) {
    const auto& x = a.vars[v];
    const auto& y = b.vars[v];
    if (x.name != y.name || x.type != y.type || Round12(x.lower) != Round12(y.lower) ||
        Round12(x.upper) != Round12(y.upper)) {
      return false;
    }
  }
  auto same_terms = [](const std::vector<LinearTerm>& p, const std::vector<LinearTerm>& q) {
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].var != q[i].var || Round12(p[i].coef) != Round12(q[i].coef)) return false;
    }
    return true;
  };
  if (!same_terms(a.objective, b.objective)) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const auto& x = a.rows[r];
    const auto& y = b.rows[r];
    if (x.name != y.name || x.sense != y.sense || Round12(x.rhs) != Round12(y.rhs) || !same_terms(x.terms, y.terms)) {
      return false;
    }
  }
  return true;
}

}  // namespace pdptwse
