#include "carshare/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "carshare/preprocess.hpp"
#include "carshare/priority.hpp"

namespace carshare {

int Model::row_count(RowKind k) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [k](const Constraint& r) { return r.kind == k; }));
}

int Model::var_count(VarKind k) const {
  return static_cast<int>(std::count_if(vars.begin(), vars.end(), [k](const Variable& v) { return v.kind == k; }));
}

std::size_t Model::nonzeros() const {
  std::size_t nz = 0;
  for (const auto& r : rows) nz += r.coefs.size();
  return nz;
}

namespace {

class Builder {
 public:
  Builder(const Network& net, ModelOptions opt) : net_(net), opt_(opt) {}

  Model build() {
    m_.customer_count = net_.customer_count;
    m_.customer_var.assign(static_cast<std::size_t>(net_.customer_count) + 1, -1);
    add_customer_columns();
    row_of_.assign(net_.vertices.size(), -1);
    for (std::size_t v = 0; v < net_.vertices.size(); ++v) {
      if (!net_.vertices[v].alive || static_cast<int>(v) == net_.source || static_cast<int>(v) == net_.sink) continue;
      row_of_[v] = m_.row_count();
      m_.rows.push_back({"flow_" + std::to_string(v), RowKind::flow, Sense::eq, 0.0, {}});
    }
    for (std::size_t e = 0; e < net_.arcs.size(); ++e)
      if (net_.arcs[e].alive) add_arc(static_cast<int>(e));
    if (opt_.unmerged) {
      for (CustomerId c = 1; c <= net_.customer_count; ++c) link(out_col_[static_cast<std::size_t>(c)], ret_col_[static_cast<std::size_t>(c)], RowKind::link);
    }
    for (auto& r : m_.rows) normalize(r);
    return std::move(m_);
  }

 private:
  void add_customer_columns() {
    out_col_.assign(static_cast<std::size_t>(net_.customer_count) + 1, -1);
    ret_col_ = out_col_;
    for (CustomerId c = 1; c <= net_.customer_count; ++c) {
      const auto cs = std::to_string(c);
      if (opt_.unmerged) {
        out_col_[static_cast<std::size_t>(c)] = add_var({"xo_" + cs, VarKind::outbound, 0, 1, 1, true, c, -1});
        ret_col_[static_cast<std::size_t>(c)] = add_var({"xr_" + cs, VarKind::ret, 0, 1, 0, true, c, -1});
      } else {
        const int col = add_var({"xd_" + cs, VarKind::customer, 0, 1, 1, true, c, -1});
        out_col_[static_cast<std::size_t>(c)] = ret_col_[static_cast<std::size_t>(c)] = col;
      }
      m_.customer_var[static_cast<std::size_t>(c)] = out_col_[static_cast<std::size_t>(c)];
    }
  }

  int add_var(Variable v) {
    m_.vars.push_back(std::move(v));
    return m_.var_count() - 1;
  }

  int column_of(const ArcOwner& o) const {
    return (o.leg == Leg::outbound ? out_col_ : ret_col_)[static_cast<std::size_t>(o.customer)];
  }

  // equality row a - b = 0, once per unordered pair
  void link(int a, int b, RowKind kind) {
    if (a == b) return;
    if (!linked_.insert({std::min(a, b), std::max(a, b)}).second) return;
    const auto& va = m_.vars[static_cast<std::size_t>(a)];
    const auto& vb = m_.vars[static_cast<std::size_t>(b)];
    m_.rows.push_back({"link_" + va.name + "_" + vb.name, kind, Sense::eq, 0.0, {{a, 1.0}, {b, -1.0}}});
  }

  void add_arc(int e) {
    const Arc& a = net_.arcs[static_cast<std::size_t>(e)];
    int col;
    if (!a.owners.empty()) {
      col = column_of(a.owners.front());
      for (const auto& o : a.owners) {
        const int other = column_of(o);
        link(col, other, RowKind::link);
        auto& v = m_.vars[static_cast<std::size_t>(other)];
        v.ub = std::min(v.ub, static_cast<double>(a.capacity));
      }
    } else {
      Variable v;
      v.lb = 0;
      v.ub = static_cast<double>(a.capacity);
      v.arc = e;
      if (a.kind == ArcKind::source) {
        v.kind = VarKind::source;
        v.name = e == 0 ? "src_A" : e == 1 ? "src_B" : "src_" + std::to_string(e);
      } else {
        v.kind = VarKind::connecting;
        v.name = "conn_" + vertex_name(a.tail) + "_" + vertex_name(a.head);
        if (!names_.insert(v.name).second) v.name += "_" + std::to_string(e);
      }
      col = add_var(std::move(v));
    }
    if (row_of_[static_cast<std::size_t>(a.tail)] >= 0)
      m_.rows[static_cast<std::size_t>(row_of_[static_cast<std::size_t>(a.tail)])].coefs.emplace_back(col, -1.0);
    if (row_of_[static_cast<std::size_t>(a.head)] >= 0)
      m_.rows[static_cast<std::size_t>(row_of_[static_cast<std::size_t>(a.head)])].coefs.emplace_back(col, 1.0);
  }

  std::string vertex_name(int v) const {
    if (v == net_.source) return "s";
    if (v == net_.sink) return "t";
    return std::to_string(v);
  }

  static void normalize(Constraint& r) {
    std::sort(r.coefs.begin(), r.coefs.end());
    std::vector<std::pair<int, double>> merged;
    for (const auto& [c, v] : r.coefs) {
      if (!merged.empty() && merged.back().first == c)
        merged.back().second += v;
      else
        merged.emplace_back(c, v);
    }
    std::erase_if(merged, [](const auto& p) { return p.second == 0.0; });
    r.coefs = std::move(merged);
  }

  const Network& net_;
  ModelOptions opt_;
  Model m_;
  std::vector<int> row_of_;
  std::vector<int> out_col_, ret_col_;
  std::set<std::pair<int, int>> linked_;
  std::set<std::string> names_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

Model build_cs1(const Network& net, ModelOptions opt) { return Builder(net, opt).build(); }

Model build_cs2(const Network& net, const PriorityDag& forest, ModelOptions opt) {
  Model m = build_cs1(net, opt);
  add_precedence_rows(m, forest);
  return m;
}

void add_precedence_rows(Model& m, const PriorityDag& arcs) {
  for (const auto& a : arcs.arcs) {
    if (a.from < 1 || a.to < 1 || a.from > m.customer_count || a.to > m.customer_count)
      throw std::invalid_argument("precedence arc references unknown customer");
    std::vector<std::pair<int, double>> coefs{{m.column(a.from), 1.0}, {m.column(a.to), -1.0}};
    std::sort(coefs.begin(), coefs.end());
    m.rows.push_back({"prec_" + std::to_string(a.from) + "_" + std::to_string(a.to), RowKind::precedence, Sense::le,
                      0.0, std::move(coefs)});
  }
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "cs1") return ModelKind::cs1;
  if (s == "cs2") return ModelKind::cs2;
  throw std::invalid_argument("unknown model '" + s + "' (expected cs1 or cs2)");
}

const char* to_string(ModelKind k) { return k == ModelKind::cs1 ? "cs1" : "cs2"; }

Model build_model(const Instance& inst, ModelKind kind, bool preprocess, ModelOptions opt) {
  Network net = build_network(inst);
  if (preprocess) net = minimize(net).network;
  if (kind == ModelKind::cs1) return build_cs1(net, opt);
  return build_cs2(net, priority_constraints(inst).forest, opt);
}

ModelFormat parse_model_format(const std::string& s) {
  if (s == "mps") return ModelFormat::mps;
  if (s == "lp") return ModelFormat::lp;
  throw std::invalid_argument("unknown model format '" + s + "' (expected mps or lp)");
}

void write_mps(const Model& m, std::ostream& out) {
  char line[256];
  out << "NAME          carshare\n";
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  obj\n";
  for (const auto& r : m.rows) out << (r.sense == Sense::eq ? " E  " : " L  ") << r.name << '\n';

  std::vector<std::vector<std::pair<int, double>>> by_col(m.vars.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (const auto& [c, v] : m.rows[i].coefs) by_col[static_cast<std::size_t>(c)].emplace_back(static_cast<int>(i), v);

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  auto set_int = [&](bool want) {
    if (want == in_int) return;
    std::snprintf(line, sizeof line, "    MARKER%d      'MARKER'                 '%s'\n", marker++, want ? "INTORG" : "INTEND");
    out << line;
    in_int = want;
  };
  for (std::size_t j = 0; j < m.vars.size(); ++j) {
    const auto& v = m.vars[j];
    set_int(v.integer);
    std::vector<std::pair<std::string, double>> entries;
    if (v.obj != 0.0) entries.emplace_back("obj", v.obj);
    for (const auto& [i, a] : by_col[j]) entries.emplace_back(m.rows[static_cast<std::size_t>(i)].name, a);
    if (entries.empty()) entries.emplace_back("obj", 0.0);
    for (std::size_t k = 0; k < entries.size(); k += 2) {
      std::snprintf(line, sizeof line, "    %-8s  %-8s  %12s", v.name.c_str(), entries[k].first.c_str(),
                    fmt(entries[k].second).c_str());
      out << line;
      if (k + 1 < entries.size()) {
        std::snprintf(line, sizeof line, "   %-8s  %12s", entries[k + 1].first.c_str(), fmt(entries[k + 1].second).c_str());
        out << line;
      }
      out << '\n';
    }
  }
  set_int(false);
  out << "RHS\n";
  for (const auto& r : m.rows) {
    if (r.rhs == 0.0) continue;
    std::snprintf(line, sizeof line, "    rhs       %-8s  %12s\n", r.name.c_str(), fmt(r.rhs).c_str());
    out << line;
  }
  out << "BOUNDS\n";
  for (const auto& v : m.vars) {
    if (v.lb == v.ub) {
      std::snprintf(line, sizeof line, " FX bnd       %-8s  %12s\n", v.name.c_str(), fmt(v.lb).c_str());
      out << line;
      continue;
    }
    if (v.lb != 0.0) {
      std::snprintf(line, sizeof line, " LO bnd       %-8s  %12s\n", v.name.c_str(), fmt(v.lb).c_str());
      out << line;
    }
    std::snprintf(line, sizeof line, " UP bnd       %-8s  %12s\n", v.name.c_str(), fmt(v.ub).c_str());
    out << line;
  }
  out << "ENDATA\n";
}

void write_lp(const Model& m, std::ostream& out) {
  auto term = [&](double a, const std::string& name, bool first) {
    std::string s;
    if (a < 0)
      s = "- ";
    else if (!first)
      s = "+ ";
    if (std::abs(a) != 1.0) s += fmt(std::abs(a)) + " ";
    return s + name;
  };
  auto emit = [&](const std::vector<std::string>& terms) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      out << ' ' << terms[k];
      if (k % 8 == 7 && k + 1 < terms.size()) out << "\n   ";
    }
  };
  out << "\\ carshare model\nMaximize\n obj:";
  std::vector<std::string> terms;
  for (const auto& v : m.vars)
    if (v.obj != 0.0) terms.push_back(term(v.obj, v.name, terms.empty()));
  if (terms.empty()) terms.push_back("0 " + (m.vars.empty() ? std::string("dummy") : m.vars.front().name));
  emit(terms);
  out << "\nSubject To\n";
  for (const auto& r : m.rows) {
    out << ' ' << r.name << ':';
    terms.clear();
    for (const auto& [c, a] : r.coefs) terms.push_back(term(a, m.vars[static_cast<std::size_t>(c)].name, terms.empty()));
    emit(terms);
    out << (r.sense == Sense::eq ? " = " : " <= ") << fmt(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : m.vars) out << ' ' << fmt(v.lb) << " <= " << v.name << " <= " << fmt(v.ub) << '\n';
  if (m.vars.empty()) out << " dummy = 0\n";
  bool any_int = std::any_of(m.vars.begin(), m.vars.end(), [](const Variable& v) { return v.integer; });
  if (any_int) {
    out << "Generals\n";
    for (const auto& v : m.vars)
      if (v.integer) out << ' ' << v.name << '\n';
  }
  out << "End\n";
}

void export_model(const Model& m, ModelFormat f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (f == ModelFormat::mps)
    write_mps(m, out);
  else
    write_lp(m, out);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

namespace {

CustomerId id_after(const std::string& name, std::size_t prefix) {
  try {
    return std::stoi(name.substr(prefix));
  } catch (const std::exception&) {
    throw ModelFormatError("bad customer column name " + name);
  }
}

}  // namespace

Model read_mps(std::istream& in) {
  Model m;
  std::map<std::string, int> row_index, col_index;
  std::string section, line;
  bool maximize = false, in_int = false;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ModelFormatError("mps line " + std::to_string(lineno) + ": " + what);
  };
  auto column = [&](const std::string& name) -> int {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    Variable v;
    v.name = name;
    v.lb = 0;
    v.ub = std::numeric_limits<double>::infinity();
    v.integer = in_int;
    if (name.rfind("xd_", 0) == 0) {
      v.kind = VarKind::customer;
      v.customer = id_after(name, 3);
    } else if (name.rfind("xo_", 0) == 0) {
      v.kind = VarKind::outbound;
      v.customer = id_after(name, 3);
    } else if (name.rfind("xr_", 0) == 0) {
      v.kind = VarKind::ret;
      v.customer = id_after(name, 3);
    } else if (name.rfind("src_", 0) == 0) {
      v.kind = VarKind::source;
    }
    m.vars.push_back(v);
    return col_index[name] = m.var_count() - 1;
  };
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double x = std::stod(s, &used);
      if (used != s.size()) fail("bad number '" + s + "'");
      return x;
    } catch (const std::invalid_argument&) {
      fail("bad number '" + s + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range '" + s + "'");
    }
    return 0.0;
  };
  std::vector<std::pair<int, std::pair<int, double>>> entries;  // (row, (col, value))

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (line[0] != ' ') {
      section = tok[0];
      if (section == "OBJSENSE" && tok.size() > 1) maximize = tok[1] == "MAX" || tok[1] == "MAXIMIZE";
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "OBJSENSE") {
      maximize = tok[0] == "MAX" || tok[0] == "MAXIMIZE";
    } else if (section == "ROWS") {
      if (tok.size() != 2) fail("expected row type and name");
      if (tok[0] == "N") continue;
      Constraint r;
      r.name = tok[1];
      if (tok[0] == "E")
        r.sense = Sense::eq;
      else if (tok[0] == "L")
        r.sense = Sense::le;
      else
        fail("unsupported row type " + tok[0]);
      r.kind = r.name.rfind("prec_", 0) == 0 ? RowKind::precedence
               : r.name.rfind("link_", 0) == 0 ? RowKind::link
                                                 : RowKind::flow;
      row_index[r.name] = m.row_count();
      m.rows.push_back(std::move(r));
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        in_int = tok[2] == "'INTORG'";
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5) fail("expected column entries");
      const int c = column(tok[0]);
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        const double x = number(tok[k + 1]);
        if (tok[k] == "obj") {
          m.vars[static_cast<std::size_t>(c)].obj = x;
          continue;
        }
        auto it = row_index.find(tok[k]);
        if (it == row_index.end()) fail("unknown row " + tok[k]);
        entries.push_back({it->second, {c, x}});
      }
    } else if (section == "RHS") {
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        auto it = row_index.find(tok[k]);
        if (it == row_index.end()) fail("unknown row " + tok[k]);
        m.rows[static_cast<std::size_t>(it->second)].rhs = number(tok[k + 1]);
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) fail("short bound line");
      auto it = col_index.find(tok[2]);
      if (it == col_index.end()) fail("unknown column " + tok[2]);
      auto& v = m.vars[static_cast<std::size_t>(it->second)];
      const double x = tok.size() > 3 ? number(tok[3]) : 0.0;
      if (tok[0] == "UP")
        v.ub = x;
      else if (tok[0] == "LO")
        v.lb = x;
      else if (tok[0] == "FX")
        v.lb = v.ub = x;
      else if (tok[0] == "BV") {
        v.lb = 0;
        v.ub = 1;
        v.integer = true;
      } else
        fail("unsupported bound type " + tok[0]);
    } else {
      fail("data outside a known section");
    }
  }
  if (!maximize)
    for (auto& v : m.vars) v.obj = -v.obj;
  for (const auto& [r, cv] : entries) m.rows[static_cast<std::size_t>(r)].coefs.push_back(cv);
  for (auto& r : m.rows) std::sort(r.coefs.begin(), r.coefs.end());
  for (const auto& v : m.vars) m.customer_count = std::max(m.customer_count, v.customer);
  m.customer_var.assign(static_cast<std::size_t>(m.customer_count) + 1, -1);
  for (int j = 0; j < m.var_count(); ++j) {
    const auto& v = m.vars[static_cast<std::size_t>(j)];
    if (v.kind == VarKind::customer || v.kind == VarKind::outbound) m.customer_var[static_cast<std::size_t>(v.customer)] = j;
  }
  return m;
}

}  // namespace carshare
