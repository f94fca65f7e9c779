#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nestedvrp/core.hpp"

namespace nvrp {

enum class Variant { Milp, MilpDl, MilpSd };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::Milp: return "MILP";
    case Variant::MilpDl: return "MILP_DL";
    case Variant::MilpSd: return "MILP_SD";
  }
  return "?";
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "milp" || s == "MILP") return Variant::Milp;
  if (s == "dl" || s == "MILP_DL") return Variant::MilpDl;
  if (s == "sd" || s == "MILP_SD") return Variant::MilpSd;
  throw ParameterError("unknown model variant '" + s + "' (expected milp, dl or sd)");
}

enum class VarType { Binary, Continuous };
enum class Sense { Le, Ge, Eq };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
  double lb = 0.0;
  double ub = std::numeric_limits<double>::infinity();

  bool operator==(const Variable&) const = default;
};

struct Row {
  std::string name;
  std::string tag;  // constraint family, e.g. "21*" or "SD-4"
  std::vector<std::pair<int, double>> terms;
  Sense sense = Sense::Le;
  double rhs = 0.0;

  bool operator==(const Row&) const = default;
};

struct MipModel {
  Variant variant = Variant::Milp;
  int n = 0;
  std::vector<Variable> vars;
  std::vector<Row> rows;
  std::vector<std::pair<int, double>> objective;
  std::unordered_map<std::string, int> index;

  bool operator==(const MipModel&) const = default;

  int add_var(const std::string& name, VarType type, double lb, double ub) {
    if (index.count(name)) throw StructuralError("duplicate variable " + name);
    index.emplace(name, static_cast<int>(vars.size()));
    vars.push_back({name, type, lb, ub});
    return static_cast<int>(vars.size()) - 1;
  }

  int var(const std::string& name) const {
    const auto it = index.find(name);
    if (it == index.end()) throw StructuralError("undeclared variable " + name);
    return it->second;
  }

  bool has(const std::string& name) const { return index.count(name) > 0; }

  int count(VarType t) const {
    return static_cast<int>(std::count_if(vars.begin(), vars.end(), [t](const Variable& v) { return v.type == t; }));
  }

  int count_tag(const std::string& tag) const {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const Row& r) { return r.tag == tag; }));
  }
};

// Row-name prefix to constraint family.
inline const std::vector<std::pair<std::string, std::string>>& row_families() {
  static const std::vector<std::pair<std::string, std::string>> fam = {
      {"c1", "1"},        {"c2", "2"},        {"c3", "3"},        {"c4lo", "4"},      {"c4hi", "4"},
      {"c5", "5"},        {"c6", "6"},        {"c7", "7"},        {"c8", "8"},        {"c9", "9"},
      {"c10in", "10"},    {"c10out", "10"},   {"c11", "11"},      {"c12", "12"},      {"c13", "13"},
      {"c14", "14"},      {"c15a", "15*"},    {"c15b", "15*"},    {"c15c", "15*"},    {"c15", "15*"},
      {"c16", "16"},      {"c17", "17"},      {"c18", "18"},      {"c19", "19"},      {"c20", "20"},
      {"c21a", "21*"},    {"c21b", "21*"},    {"c21c", "21*"},    {"c21", "21*"},     {"c22", "22*"},
      {"c23", "23"},      {"c24", "24"},      {"c25", "25"},      {"c26", "26"},      {"c27", "27"},
      {"c28a", "28*"},    {"c28b", "28*"},    {"c28c", "28*"},    {"c28", "28*"},     {"c30a", "30"},
      {"c30b", "30"},     {"cterm", "terminal"}, {"DL1lo", "DL-1"}, {"DL1hi", "DL-1"}, {"DL2", "DL-2"},
      {"SD1", "SD-1"},    {"SD2", "SD-2"},    {"SD3lo", "SD-3"},  {"SD3hi", "SD-3"},  {"SD4lo", "SD-4"},
      {"SD4hi", "SD-4"},  {"SD5lo", "SD-5"},  {"SD5hi", "SD-5"},
  };
  return fam;
}

inline std::string tag_for_row(const std::string& name) {
  const auto prefix = name.substr(0, name.find('_'));
  for (const auto& [p, tag] : row_families())
    if (p == prefix) return tag;
  return "";
}

struct ModelCounts {
  long binary = 0;
  long continuous = 0;
  long rows = 0;
};

// Closed forms for the arc set |A| = n^2 + n + 1.
inline ModelCounts expected_counts(long n, Variant v) {
  ModelCounts c;
  c.binary = 4 * n * n + 7 * n + 8;
  c.continuous = 7 * n + 8 + (v == Variant::MilpSd ? n * n : 0);
  switch (v) {
    case Variant::Milp: c.rows = 13 * n * n + 35 * n + 33; break;
    case Variant::MilpDl: c.rows = 13 * n * n + 35 * n + 31; break;
    case Variant::MilpSd: c.rows = 16 * n * n + 37 * n + 33; break;
  }
  return c;
}

namespace detail {

inline std::string vname(const char* base, int i) { return std::string(base) + "_" + std::to_string(i); }
inline std::string vname(const char* base, int i, int j) {
  return std::string(base) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

class RowBuilder {
 public:
  RowBuilder(MipModel& m, std::string name) : m_(m) { row_.name = std::move(name); }

  RowBuilder& add(const std::string& var, double coef) {
    row_.terms.emplace_back(m_.var(var), coef);
    return *this;
  }
  RowBuilder& add_if(bool present, const std::string& var, double coef) {
    if (present) add(var, coef);
    return *this;
  }

  void le(double rhs) { finish(Sense::Le, rhs); }
  void ge(double rhs) { finish(Sense::Ge, rhs); }
  void eq(double rhs) { finish(Sense::Eq, rhs); }

 private:
  void finish(Sense s, double rhs) {
    // merge repeated variables, drop zeros, keep first-appearance order
    std::vector<std::pair<int, double>> merged;
    for (const auto& [v, c] : row_.terms) {
      auto it = std::find_if(merged.begin(), merged.end(), [v = v](const auto& t) { return t.first == v; });
      if (it == merged.end())
        merged.emplace_back(v, c);
      else
        it->second += c;
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const auto& t) { return t.second == 0.0; }),
                 merged.end());
    row_.terms = std::move(merged);
    row_.sense = s;
    row_.rhs = rhs;
    row_.tag = tag_for_row(row_.name);
    m_.rows.push_back(std::move(row_));
  }

  MipModel& m_;
  Row row_;
};

}  // namespace detail

// Linearized Nested-VRP model over nodes 0..n+1, where n+1 is a copy of the depot.
inline MipModel build_model(const Problem& pr, Variant variant) {
  using detail::vname;
  const int n = pr.size();
  if (n < 1) throw ParameterError("the model needs at least one location");
  const int last = n + 1;
  const double Tbl = pr.p.battery;
  const double Ts = pr.p.swap_time;
  const auto& inst = pr.instance();

  auto loc = [last](int node) { return node == last ? 0 : node; };
  auto tauD = [&](int i, int j) { return pr.m.drone(loc(i), loc(j)); };
  auto tauT = [&](int i, int j) { return pr.m.truck(loc(i), loc(j)); };
  auto obs = [&](int j) { return inst.locations[static_cast<std::size_t>(j)].obs_time; };
  auto arc = [last](int i, int j) { return i != last && j != 0 && i != j && i >= 0 && j <= last; };

  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= last; ++j)
      if (i != j) arcs.emplace_back(i, j);

  double M1 = 0.0;
  double maxD = 0.0;
  for (auto [i, j] : arcs) {
    M1 = std::max(M1, tauT(i, j));
    maxD = std::max(maxD, tauD(i, j));
  }
  const double Mt = Tbl + maxD;          // timer rows on arcs the drone does not fly
  const double Mship = std::max(M1, Ts);  // IBR cap on shipment arrivals

  MipModel m;
  m.variant = variant;
  m.n = n;
  const double inf = std::numeric_limits<double>::infinity();
  const double un = static_cast<double>(n);

  for (auto [i, j] : arcs) m.add_var(vname("x", i, j), VarType::Binary, 0, 1);
  for (auto [i, j] : arcs) m.add_var(vname("y", i, j), VarType::Binary, 0, 1);
  for (auto [i, j] : arcs) m.add_var(vname("w", i, j), VarType::Binary, 0, 1);
  for (auto [i, j] : arcs) m.add_var(vname("q", i, j), VarType::Binary, 0, 1);
  for (int i = 1; i <= last; ++i) m.add_var(vname("zm", i), VarType::Binary, 0, 1);
  for (int i = 0; i <= n; ++i) m.add_var(vname("zp", i), VarType::Binary, 0, 1);
  for (int i = 0; i <= last; ++i) m.add_var(vname("z", i), VarType::Binary, 0, 1);
  for (int i = 1; i <= last; ++i) m.add_var(vname("tm", i), VarType::Continuous, 0, Tbl);
  for (int i = 0; i <= n; ++i) m.add_var(vname("tp", i), VarType::Continuous, 0, Tbl);
  for (int i = 1; i <= last; ++i) m.add_var(vname("lm", i), VarType::Continuous, 0, inf);
  for (int i = 0; i <= n; ++i) m.add_var(vname("lp", i), VarType::Continuous, 0, inf);
  for (int i = 0; i <= last; ++i) m.add_var(vname("u", i), VarType::Continuous, 0, un + 1);
  for (int i = 1; i <= n; ++i) m.add_var(vname("p", i), VarType::Continuous, 0, Tbl);
  for (int i = 0; i <= n; ++i) m.add_var(vname("f", i), VarType::Continuous, 0, Tbl);
  m.add_var("one", VarType::Continuous, 1, 1);
  if (variant == Variant::MilpSd)
    for (auto [i, j] : arcs)
      if (i != 0) m.add_var(vname("r", i, j), VarType::Continuous, 0, un);

  auto row = [&m](std::string name) { return detail::RowBuilder(m, std::move(name)); };
  const auto X = [](int i, int j) { return vname("x", i, j); };
  const auto Y = [](int i, int j) { return vname("y", i, j); };
  const auto W = [](int i, int j) { return vname("w", i, j); };
  const auto Q = [](int i, int j) { return vname("q", i, j); };
  const auto R = [](int i, int j) { return vname("r", i, j); };

  // drone route
  for (int i = 0; i <= n; ++i) {
    auto r = row(vname("c1", i));
    for (int j = 1; j <= last; ++j) r.add_if(arc(i, j), X(i, j), 1);
    r.eq(1);
  }
  for (int j = 1; j <= last; ++j) {
    auto r = row(vname("c2", j));
    for (int i = 0; i <= n; ++i) r.add_if(arc(i, j), X(i, j), 1);
    r.eq(1);
  }
  row("c3").add("u_0", 1).eq(0);

  // subtour elimination for the drone
  if (variant == Variant::Milp) {
    for (int i = 1; i <= last; ++i) {
      row(vname("c4lo", i)).add(vname("u", i), 1).ge(1);
      row(vname("c4hi", i)).add(vname("u", i), 1).le(un + 1);
    }
    for (auto [i, j] : arcs)
      if (i != 0) row(vname("c5", i, j)).add(vname("u", i), 1).add(vname("u", j), -1).add(X(i, j), un + 1).le(un);
  } else {
    const std::string lo = variant == Variant::MilpDl ? "DL1lo" : "SD5lo";
    const std::string hi = variant == Variant::MilpDl ? "DL1hi" : "SD5hi";
    if (variant == Variant::MilpSd) {
      for (int i = 0; i <= n; ++i) {
        auto r = row(vname("SD1", i));
        if (i != 0)
          for (int j = 1; j <= n; ++j) r.add_if(arc(i, j), R(i, j), 1);
        r.add(X(i, last), un).add(vname("u", i), -1).eq(0);
      }
      for (int j = 1; j <= last; ++j) {
        auto r = row(vname("SD2", j));
        for (int i = 1; i <= n; ++i) r.add_if(arc(i, j), R(i, j), 1);
        r.add(vname("u", j), -1).eq(-1);
      }
      for (auto [i, j] : arcs) {
        if (i == 0) continue;
        row(vname("SD3lo", i, j)).add(R(i, j), 1).add(X(i, j), -1).ge(0);
        row(vname("SD3hi", i, j)).add(R(i, j), 1).add(X(i, j), -un).le(0);
      }
      for (auto [i, j] : arcs) {
        if (i == 0) continue;
        const bool back = arc(j, i);
        row(vname("SD4lo", i, j))
            .add(R(i, j), 1)
            .add_if(back, R(j, i), 1)
            .add(vname("u", i), -1)
            .add(X(i, j), -(un + 1))
            .add_if(back, X(j, i), -un)
            .ge(-(un + 1));
        row(vname("SD4hi", i, j))
            .add(R(i, j), 1)
            .add_if(back, R(j, i), 1)
            .add(vname("u", i), -1)
            .add(X(i, j), -1)
            .le(-1);
      }
    }
    for (int i = 1; i <= n; ++i) {
      row(vname(lo.c_str(), i)).add(vname("u", i), 1).add(X(0, i), 1).add(X(i, last), -(un - 2)).ge(2);
      row(vname(hi.c_str(), i)).add(vname("u", i), 1).add(X(0, i), un - 1).add(X(i, last), -1).le(un);
    }
    if (variant == Variant::MilpDl) {
      for (auto [i, j] : arcs) {
        if (i == 0) continue;
        row(vname("DL2", i, j))
            .add(vname("u", i), 1)
            .add(vname("u", j), -1)
            .add(X(i, j), un + 1)
            .add_if(arc(j, i), X(j, i), un - 1)
            .le(un);
      }
    }
  }

  // swap stops and truck route
  for (int i = 1; i <= n; ++i)
    row(vname("c6", i)).add(vname("z", i), 1).add(vname("zm", i), -1).add(vname("zp", i), -1).le(0);
  for (int i = 1; i <= last; ++i) row(vname("c7", i)).add(vname("z", i), 1).add(vname("zm", i), -1).ge(0);
  for (int i = 0; i <= n; ++i) row(vname("c8", i)).add(vname("z", i), 1).add(vname("zp", i), -1).ge(0);
  {
    auto r = row("c9");
    for (int j = 1; j <= last; ++j) r.add(Y(0, j), 1);
    r.eq(1);
  }
  for (int j = 1; j <= n; ++j) {
    auto in = row(vname("c10in", j));
    for (int i = 0; i <= n; ++i) in.add_if(arc(i, j), Y(i, j), 1);
    in.add(vname("z", j), -1).eq(0);
    auto out = row(vname("c10out", j));
    for (int k = 1; k <= last; ++k) out.add_if(arc(j, k), Y(j, k), 1);
    out.add(vname("z", j), -1).eq(0);
  }
  for (auto [i, j] : arcs)
    if (i != 0) row(vname("c11", i, j)).add(vname("u", i), 1).add(vname("u", j), -1).add(Y(i, j), un + 1).le(un);
  for (auto [i, j] : arcs) row(vname("c12", i, j)).add(Y(i, j), tauT(i, j)).add(W(i, j), -M1).le(Tbl);

  // timers
  for (int j = 1; j <= last; ++j) row(vname("c13", j)).add(vname("tm", j), 1).le(Tbl);
  for (int j = 0; j <= n; ++j) row(vname("c14", j)).add(vname("tp", j), 1).le(Tbl);
  for (int j = 1; j <= n; ++j) {
    row(vname("c15a", j)).add(vname("p", j), 1).add(vname("zm", j), -Tbl).le(0);
    row(vname("c15b", j)).add(vname("p", j), 1).add(vname("tm", j), -1).le(0);
    row(vname("c15c", j)).add(vname("p", j), 1).add(vname("tm", j), -1).add(vname("zm", j), -Tbl).ge(-Tbl);
    row(vname("c15", j)).add(vname("tp", j), 1).add(vname("tm", j), -1).add(vname("p", j), 1).eq(obs(j));
  }
  for (auto [i, j] : arcs) row(vname("c16", i, j)).add(W(i, j), 1).add(X(i, j), -1).le(0);
  for (auto [i, j] : arcs) row(vname("c17", i, j)).add(W(i, j), 1).add(Y(i, j), -1).le(0);
  for (auto [i, j] : arcs) row(vname("c18", i, j)).add(W(i, j), 1).add(vname("zp", i), -1).le(0);
  for (auto [i, j] : arcs) row(vname("c19", i, j)).add(W(i, j), 1).add(vname("zm", j), -1).le(0);
  for (auto [i, j] : arcs)
    row(vname("c20", i, j))
        .add(X(i, j), 1)
        .add(Y(i, j), 1)
        .add(vname("zp", i), 1)
        .add(vname("zm", j), 1)
        .add(W(i, j), -1)
        .le(3);
  for (int i = 0; i <= n; ++i) {
    row(vname("c21a", i)).add(vname("f", i), 1).add(vname("zp", i), -Tbl).le(0);
    row(vname("c21b", i)).add(vname("f", i), 1).add(vname("tp", i), -1).le(0);
    row(vname("c21c", i)).add(vname("f", i), 1).add(vname("tp", i), -1).add(vname("zp", i), -Tbl).ge(-Tbl);
  }
  for (auto [i, j] : arcs) {
    const double d = tauD(i, j);
    row(vname("c21", i, j))
        .add(vname("tm", j), 1)
        .add(vname("tp", i), -1)
        .add(vname("f", i), 1)
        .add(W(i, j), d)
        .add(X(i, j), Mt)
        .le(d + Mt);
  }
  for (auto [i, j] : arcs) {
    const double d = tauD(i, j);
    row(vname("c22", i, j))
        .add(vname("tm", j), 1)
        .add(vname("tp", i), -1)
        .add(vname("f", i), 1)
        .add(W(i, j), d)
        .add(X(i, j), -Mt)
        .ge(d - Mt);
  }

  // intervals between rendezvous
  for (int j = 1; j <= last; ++j) {
    auto r = row(vname("c23", j));
    r.add(vname("lm", j), 1).add(vname("zm", j), -Tbl);
    for (int i = 0; i <= n; ++i) r.add_if(arc(i, j), W(i, j), -Mship);
    r.le(0);
  }
  for (int j = 0; j <= n; ++j) row(vname("c24", j)).add(vname("lp", j), 1).add(vname("zp", j), -Tbl).le(0);
  for (int j = 1; j <= last; ++j)
    row(vname("c25", j)).add(vname("lm", j), 1).add(vname("tm", j), -1).add(vname("zm", j), -Tbl).ge(-Tbl);
  for (int j = 1; j <= last; ++j) {
    auto r = row(vname("c26", j));
    r.add(vname("lm", j), 1);
    for (int i = 0; i <= n; ++i) {
      if (!arc(i, j)) continue;
      const double t = tauT(i, j);
      r.add(Y(i, j), -t).add(W(i, j), -(std::max(t, Ts) - t));
    }
    r.add(vname("zm", j), -M1).ge(-M1);
  }
  for (int j = 0; j <= n; ++j)
    row(vname("c27", j)).add(vname("lp", j), 1).add(vname("tp", j), -1).add(vname("zp", j), -Tbl).ge(-Tbl);
  for (auto [i, j] : arcs) {
    row(vname("c28a", i, j)).add(Q(i, j), 1).add(Y(i, j), -1).le(0);
    row(vname("c28b", i, j)).add(Q(i, j), 1).add(vname("zm", j), -1).le(0);
    row(vname("c28c", i, j)).add(Y(i, j), 1).add(vname("zm", j), 1).add(Q(i, j), -1).le(1);
  }
  for (int j = 0; j <= n; ++j) {
    auto r = row(vname("c28", j));
    r.add(vname("lp", j), 1);
    for (int i = 0; i <= n; ++i) {
      if (!arc(i, j)) continue;
      r.add(Y(i, j), -tauT(i, j)).add(Q(i, j), tauT(i, j));
    }
    r.add(vname("zp", j), -M1).ge(-M1);
  }

  // initial and terminal conditions
  row("c30a").add("zp_0", 1).eq(1);
  row("c30b").add("tp_0", 1).eq(0);
  row("cterm").add(vname("zm", last), 1).eq(1);

  // objective
  auto obj = [&m](const std::string& v, double c) { m.objective.emplace_back(m.var(v), c); };
  for (int i = 1; i <= last; ++i) obj(vname("lm", i), 1);
  for (int i = 0; i <= n; ++i) obj(vname("lp", i), 1);
  for (int i = 1; i <= last; ++i) obj(vname("zm", i), Ts);
  for (int i = 0; i <= n; ++i) obj(vname("zp", i), Ts);
  for (auto [i, j] : arcs) obj(W(i, j), j == last ? -Ts : -2 * Ts);
  const double constant = pr.norm.obs_offset - Ts;
  if (constant != 0.0) obj("one", constant);
  return m;
}

inline MipModel build_model(const Instance& inst, Variant variant) { return build_model(make_problem(inst), variant); }

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

using Assignment = std::map<std::string, double>;

// Maps a simulator solution onto the model variables.
inline Assignment solution_to_assignment(const Problem& pr, const Solution& s) {
  using detail::vname;
  const int n = pr.size();
  const int last = n + 1;
  const auto& inst = pr.instance();
  if (s.route.size() != static_cast<std::size_t>(n) + 2) throw StructuralError("route does not match the instance");

  auto node_at = [&](int pos) { return pos == 0 ? 0 : pos == last ? last : s.route[static_cast<std::size_t>(pos)]; };
  auto boundary_node = [&](int b) { return b % 2 == 0 ? node_at(b / 2) : node_at(b / 2 + 1); };
  auto loc = [last](int node) { return node == last ? 0 : node; };

  Assignment a;
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= last; ++j)
      if (i != j)
        for (const char* base : {"x", "y", "w", "q", "r"}) a[vname(base, i, j)] = 0.0;
  for (int i = 1; i <= last; ++i) a[vname("zm", i)] = a[vname("tm", i)] = a[vname("lm", i)] = 0.0;
  for (int i = 0; i <= n; ++i) a[vname("zp", i)] = a[vname("tp", i)] = a[vname("lp", i)] = a[vname("f", i)] = 0.0;
  for (int i = 0; i <= last; ++i) a[vname("z", i)] = a[vname("u", i)] = 0.0;
  for (int i = 1; i <= n; ++i) a[vname("p", i)] = 0.0;
  a["one"] = 1.0;

  for (int k = 0; k <= n; ++k) {
    a[vname("u", node_at(k))] = k;
    a[vname("x", node_at(k), node_at(k + 1))] = 1.0;
  }
  a[vname("u", last)] = n + 1;

  // swap placement and IBRs
  a["zp_0"] = 1.0;
  a[vname("zm", last)] = 1.0;
  std::vector<int> stops{0};
  for (const auto& u : s.units) {
    const int node = boundary_node(u.end);
    const bool before = u.end % 2 == 1;
    a[vname(before ? "zm" : "zp", node)] = 1.0;
    a[vname(before ? "lm" : "lp", node)] = u.ibr;
    if (u.kind == UnitKind::Shipment) a[vname("w", boundary_node(u.begin), node)] = 1.0;
    if (stops.back() != node) stops.push_back(node);
  }
  if (stops.size() == 1) stops.push_back(last);
  for (std::size_t k = 1; k < stops.size(); ++k) a[vname("y", stops[k - 1], stops[k])] = 1.0;
  for (int i = 0; i <= last; ++i) {
    const bool zm = i >= 1 && a[vname("zm", i)] > 0.5;
    const bool zp = i <= n && a[vname("zp", i)] > 0.5;
    a[vname("z", i)] = (zm || zp) ? 1.0 : 0.0;
  }

  // timer replay along the drone route
  a["tp_0"] = 0.0;
  for (int k = 1; k <= last; ++k) {
    const int i = node_at(k - 1);
    const int j = node_at(k);
    const double zp = a[vname("zp", i)];
    const double w = a[vname("w", i, j)];
    const double tm = a[vname("tp", i)] * (1.0 - zp) + pr.m.drone(loc(i), loc(j)) * (1.0 - w);
    a[vname("tm", j)] = tm;
    if (j != last) a[vname("tp", j)] = tm * (1.0 - a[vname("zm", j)]) + inst.locations[static_cast<std::size_t>(j)].obs_time;
  }

  // products
  for (int j = 1; j <= n; ++j) a[vname("p", j)] = a[vname("tm", j)] * a[vname("zm", j)];
  for (int i = 0; i <= n; ++i) a[vname("f", i)] = a[vname("tp", i)] * a[vname("zp", i)];
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= last; ++j) {
      if (i == j) continue;
      a[vname("q", i, j)] = a[vname("y", i, j)] * a[vname("zm", j)];
      if (i != 0) a[vname("r", i, j)] = a[vname("u", i)] * a[vname("x", i, j)];
    }
  for (auto it = a.begin(); it != a.end();) {
    // r_0j is not a model variable
    if (it->first.rfind("r_0_", 0) == 0)
      it = a.erase(it);
    else
      ++it;
  }
  return a;
}

inline Assignment solution_to_assignment(const Instance& inst, const Solution& s) {
  return solution_to_assignment(make_problem(inst), s);
}

struct AssignmentCheck {
  bool feasible = true;
  double objective = 0.0;
  std::vector<std::string> violations;  // "name (tag): detail"

  bool violates(const std::string& prefix) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.rfind(prefix, 0) == 0; });
  }
};

inline AssignmentCheck check_assignment(const MipModel& m, const Assignment& a, double tol = 1e-6) {
  std::vector<double> val(m.vars.size());
  for (std::size_t k = 0; k < m.vars.size(); ++k) {
    const auto it = a.find(m.vars[k].name);
    if (it == a.end()) throw StructuralError("assignment misses variable " + m.vars[k].name);
    val[k] = it->second;
  }
  AssignmentCheck out;
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
  };
  for (std::size_t k = 0; k < m.vars.size(); ++k) {
    const auto& v = m.vars[k];
    if (val[k] < v.lb - tol || val[k] > v.ub + tol)
      out.violations.push_back(v.name + " (bounds): " + fmt(val[k]) + " outside [" + fmt(v.lb) + ", " + fmt(v.ub) + "]");
    if (v.type == VarType::Binary && std::abs(val[k] - std::round(val[k])) > tol)
      out.violations.push_back(v.name + " (integrality): " + fmt(val[k]));
  }
  for (const auto& r : m.rows) {
    double lhs = 0.0;
    for (const auto& [v, c] : r.terms) lhs += c * val[static_cast<std::size_t>(v)];
    bool ok = true;
    switch (r.sense) {
      case Sense::Le: ok = lhs <= r.rhs + tol; break;
      case Sense::Ge: ok = lhs >= r.rhs - tol; break;
      case Sense::Eq: ok = std::abs(lhs - r.rhs) <= tol; break;
    }
    if (!ok) out.violations.push_back(r.name + " (" + r.tag + "): lhs " + fmt(lhs) + " vs rhs " + fmt(r.rhs));
  }
  for (const auto& [v, c] : m.objective) out.objective += c * val[static_cast<std::size_t>(v)];
  out.feasible = out.violations.empty();
  return out;
}

// ---------------------------------------------------------------------------
// LP file format
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_num(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_num(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw StructuralError("bad number '" + s + "' in LP file");
  return v;
}

inline void emit_expression(std::ostream& os, const std::string& head, const std::vector<std::pair<int, double>>& terms,
                            const MipModel& m, const std::string& tail) {
  constexpr std::size_t kWidth = 78;
  std::string line = " " + head;
  auto put = [&](const std::string& tok) {
    if (line.size() + 1 + tok.size() > kWidth && line.size() > 1) {
      os << line << '\n';
      line = "  " + tok;
    } else {
      line += " " + tok;
    }
  };
  if (terms.empty()) put("0 one");
  for (const auto& [v, c] : terms) {
    const std::string coef = fmt_num(std::abs(c));
    put(std::string(c < 0 ? "- " : "+ ") + coef + " " + m.vars[static_cast<std::size_t>(v)].name);
  }
  if (!tail.empty()) put(tail);
  os << line << '\n';
}

}  // namespace detail

inline std::string to_lp_string(const MipModel& m) {
  using detail::fmt_num;
  std::ostringstream os;
  os << "\\ Nested-VRP linearized model\n";
  os << "\\ variant: " << to_string(m.variant) << "\n";
  os << "\\ n: " << m.n << "\n";
  std::vector<std::string> tags;
  for (const auto& r : m.rows)
    if (std::find(tags.begin(), tags.end(), r.tag) == tags.end()) tags.push_back(r.tag);
  for (const auto& t : tags) os << "\\ rows " << t << ": " << m.count_tag(t) << "\n";

  os << "Minimize\n";
  detail::emit_expression(os, "obj:", m.objective, m, "");
  os << "Subject To\n";
  for (const auto& r : m.rows) {
    const char* op = r.sense == Sense::Le ? "<=" : r.sense == Sense::Ge ? ">=" : "=";
    detail::emit_expression(os, r.name + ":", r.terms, m, std::string(op) + " " + fmt_num(r.rhs));
  }
  os << "Bounds\n";
  for (const auto& v : m.vars) {
    if (v.type == VarType::Binary) continue;
    if (v.lb == v.ub)
      os << " " << v.name << " = " << fmt_num(v.lb) << "\n";
    else if (std::isinf(v.ub))
      os << " " << v.name << " >= " << fmt_num(v.lb) << "\n";
    else
      os << " " << fmt_num(v.lb) << " <= " << v.name << " <= " << fmt_num(v.ub) << "\n";
  }
  os << "Binaries\n";
  std::string line;
  for (const auto& v : m.vars) {
    if (v.type != VarType::Binary) continue;
    if (line.size() + v.name.size() + 1 > 78) {
      os << line << '\n';
      line.clear();
    }
    line += " " + v.name;
  }
  if (!line.empty()) os << line << '\n';
  os << "End\n";
  return os.str();
}

inline void export_lp(const MipModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_lp_string(m);
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Reads the subset of the LP format written by export_lp.
inline MipModel parse_lp(const std::string& text) {
  using detail::parse_num;
  MipModel m;
  enum class Section { None, Objective, Constraints, Bounds, Binaries, End } sec = Section::None;

  // statements keyed by variable name until declarations are known
  struct RawRow {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    Sense sense = Sense::Le;
    double rhs = 0.0;
  };
  std::vector<RawRow> raw;
  std::vector<std::pair<std::string, double>> raw_obj;
  std::vector<std::string> order;  // first-appearance order of variables
  std::vector<std::string> bound_order;
  std::vector<std::string> binary_order;
  std::unordered_map<std::string, Variable> decl;
  auto see = [&](const std::string& name) {
    if (!decl.count(name)) {
      decl[name] = Variable{name, VarType::Continuous, 0.0, std::numeric_limits<double>::infinity()};
      order.push_back(name);
    }
  };

  std::istringstream in(text);
  std::string line;
  std::vector<std::string> pending;  // tokens of the statement in progress
  auto flush_expression = [&](bool objective) {
    if (pending.empty()) return;
    RawRow r;
    std::size_t k = 0;
    if (pending[0].back() == ':') {
      r.name = pending[0].substr(0, pending[0].size() - 1);
      k = 1;
    }
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    for (; k < pending.size(); ++k) {
      const auto& t = pending[k];
      if (t == "+" || t == "-") {
        sign = t == "-" ? -1.0 : 1.0;
      } else if (t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>") {
        r.sense = (t == "<=" || t == "=<") ? Sense::Le : (t == ">=" || t == "=>") ? Sense::Ge : Sense::Eq;
        if (k + 1 >= pending.size()) throw StructuralError("missing right-hand side in row " + r.name);
        r.rhs = parse_num(pending[k + 1]);
        break;
      } else if (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.') {
        coef = parse_num(t);
        have_coef = true;
      } else {
        see(t);
        const double c = sign * (have_coef ? coef : 1.0);
        if (c != 0.0) r.terms.emplace_back(t, c);
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
      }
    }
    if (objective)
      raw_obj = std::move(r.terms);
    else
      raw.push_back(std::move(r));
    pending.clear();
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '\\') {
      const std::string key = "\\ variant: ";
      if (line.rfind(key, 0) == 0) m.variant = variant_from_string(line.substr(key.size()));
      const std::string nkey = "\\ n: ";
      if (line.rfind(nkey, 0) == 0) m.n = std::stoi(line.substr(nkey.size()));
      continue;
    }
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    const std::string head = toks[0];
    Section next = sec;
    if (head == "Minimize" || head == "Maximize") next = Section::Objective;
    else if (head == "Subject" || head == "such" || head == "st" || head == "s.t.") next = Section::Constraints;
    else if (head == "Bounds") next = Section::Bounds;
    else if (head == "Binaries" || head == "Binary") next = Section::Binaries;
    else if (head == "End") next = Section::End;
    if (next != sec) {
      flush_expression(sec == Section::Objective);
      sec = next;
      continue;
    }
    switch (sec) {
      case Section::Objective:
      case Section::Constraints:
        // statements start one space in, continuation lines two
        if (first == 1) flush_expression(sec == Section::Objective);
        pending.insert(pending.end(), toks.begin(), toks.end());
        break;
      case Section::Bounds: {
        bound_order.push_back(toks.size() == 5 ? toks[2] : toks[0]);
        if (toks.size() == 3 && toks[1] == "=") {
          see(toks[0]);
          decl[toks[0]].lb = decl[toks[0]].ub = parse_num(toks[2]);
        } else if (toks.size() == 3 && toks[1] == ">=") {
          see(toks[0]);
          decl[toks[0]].lb = parse_num(toks[2]);
        } else if (toks.size() == 3 && toks[1] == "<=") {
          see(toks[0]);
          decl[toks[0]].ub = parse_num(toks[2]);
        } else if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
          see(toks[2]);
          decl[toks[2]].lb = parse_num(toks[0]);
          decl[toks[2]].ub = parse_num(toks[4]);
        } else if (toks.size() == 2 && toks[1] == "free") {
          see(toks[0]);
          decl[toks[0]].lb = -std::numeric_limits<double>::infinity();
        } else {
          throw StructuralError("unsupported bound line: " + line);
        }
        break;
      }
      case Section::Binaries:
        for (const auto& t : toks) {
          see(t);
          binary_order.push_back(t);
          decl[t].type = VarType::Binary;
          decl[t].lb = 0.0;
          decl[t].ub = 1.0;
        }
        break;
      case Section::None:
      case Section::End:
        break;
    }
  }
  flush_expression(sec == Section::Objective);

  // export_lp lists binaries, then continuous variables, each in model order
  std::vector<std::string> names;
  for (const auto& nme : binary_order) names.push_back(nme);
  for (const auto& nme : bound_order)
    if (decl[nme].type != VarType::Binary) names.push_back(nme);
  for (const auto& nme : order)
    if (std::find(names.begin(), names.end(), nme) == names.end()) names.push_back(nme);
  for (const auto& nme : names) m.add_var(nme, decl[nme].type, decl[nme].lb, decl[nme].ub);
  for (const auto& [v, c] : raw_obj) m.objective.emplace_back(m.var(v), c);
  for (const auto& r : raw) {
    Row row;
    row.name = r.name;
    row.tag = tag_for_row(r.name);
    for (const auto& [v, c] : r.terms) row.terms.emplace_back(m.var(v), c);
    row.sense = r.sense;
    row.rhs = r.rhs;
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace nvrp
