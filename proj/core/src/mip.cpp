#include "pdptwse/mip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pdptwse {

BigM ComputeBigM(const Instance& inst) {
  const int N = inst.num_nodes();
  double max_q = 0, max_s = 0, max_d = 0, max_dbar = 0, max_o = 0;
  for (NodeId i = 1; i <= inst.n(); ++i) max_q = std::max<double>(max_q, inst.demand(i));
  for (NodeId i = 0; i < N - 1; ++i) max_s = std::max(max_s, inst.service(i));
  for (VehicleId k = 0; k < inst.num_vehicles(); ++k) {
    for (NodeId i = 0; i < N; ++i) {
      for (NodeId j = 0; j < N; ++j) {
        const double d = inst.travel(k, i, j);
        if (i != j && std::isfinite(d)) max_d = std::max(max_d, d);
      }
      for (MachineId h = 0; h < inst.num_machines(); ++h) {
        if (inst.station_of(h, i) >= 0) max_dbar = std::max(max_dbar, inst.approach(k, i, h));
      }
    }
  }
  for (MachineId h = 0; h < inst.num_machines(); ++h) {
    for (NodeId i = 0; i < N; ++i) {
      for (NodeId j = 0; j < N; ++j) {
        if (inst.station_of(h, i) >= 0 && inst.station_of(h, j) >= 0) {
          max_o = std::max(max_o, inst.crossing_between(h, i, j));
        }
      }
    }
  }
  const double l0 = inst.depot_window().close;
  BigM m;
  m.values = {inst.max_capacity() + max_q + 1,
              l0 + max_s + max_d + 1,
              l0 + max_d + 1,
              l0 + max_s + max_dbar + 1,
              l0 + max_dbar + 1,
              l0 + max_o + max_dbar + 1,
              l0 + 2 * max_o + 1,
              max_o + 1};
  return m;
}

namespace {

constexpr const char* kViNames[kNumViFamilies] = {
    "idle",     "arc_pair",  "cross_pair", "order_pair",   "vehicle_path", "machine_path",
    "start_lb", "board_lb",  "board_ub",   "board_arc_lb", "board_arc_ub", "succession",
};

}  // namespace

const char* ViFamilyName(ViFamily family) { return kViNames[static_cast<int>(family)]; }

ViConfig ViConfig::All() {
  ViConfig c;
  c.bits_.set();
  return c;
}

ViConfig ViConfig::Standard() {
  ViConfig c = All();
  c.set(ViFamily::kMachinePath, false);
  return c;
}

ViConfig ViConfig::Parse(std::string_view text) {
  const std::string s(text);
  if (s == "none" || s.empty()) return None();
  if (s == "all") return All();
  if (s == "standard") return Standard();
  ViConfig c;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto* it = std::find(std::begin(kViNames), std::end(kViNames), item);
    if (it == std::end(kViNames)) throw std::invalid_argument("unknown inequality family: " + item);
    c.set(static_cast<ViFamily>(it - std::begin(kViNames)));
  }
  return c;
}

std::string ViConfig::ToString() const {
  if (bits_.none()) return "none";
  if (bits_.all()) return "all";
  std::string out;
  for (int f = 0; f < kNumViFamilies; ++f) {
    if (!bits_.test(f)) continue;
    if (!out.empty()) out += ",";
    out += kViNames[f];
  }
  return out;
}

bool MuIndicator(const Instance& inst, std::span<const TimeWindow> w, MachineId h, NodeId i, NodeId j, NodeId ip) {
  (void)i;
  const double earliest_from_ip = w[ip].open + inst.service(ip) + inst.min_approach(ip, h);
  const double latest_back = w[j].close - inst.min_approach(j, h) + inst.crossing_between(h, j, ip);
  return earliest_from_ip >= latest_back;
}

namespace {

std::string Name(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) {
    if (!out.empty()) out += '_';
    out += p;
  }
  return out;
}

std::string S(int v) { return std::to_string(v); }

class MipBuilder {
 public:
  MipBuilder(const Instance& inst, const PreprocessResult& pre, const ViConfig& vis)
      : inst_(inst), pre_(pre), vis_(vis), M_(ComputeBigM(inst)), bounds_(inst) {
    N_ = inst.num_nodes();
    K_ = inst.num_vehicles();
    H_ = inst.num_machines();
    end_ = inst.depot_end();
    n_ = inst.n();
    for (NodeId i = 1; i <= 2 * n_; ++i) {
      if (pre.windows[i].open > pre.windows[i].close + kTimeEps) {
        throw InfeasibleInstance("refusing to emit: empty shrunk window at node " + S(i));
      }
    }
  }

  LinearModel Build() {
    model_.name = inst_.name().empty() ? "pdptwse" : inst_.name();
    CollectArcs();
    AddVariables();
    AddRouting();
    AddScheduling();
    AddMachines();
    AddInequalities();
    return std::move(model_);
  }

 private:
  struct MArc {
    NodeId i, j;
  };

  bool Kept(NodeId i, NodeId j) const { return i != j && pre_.kept(i, j); }
  int X(int k, NodeId i, NodeId j) const { return x_[(k * N_ + i) * N_ + j]; }
  int Phi(MachineId h, NodeId i, NodeId j) const { return phi_[(h * N_ + i) * N_ + j]; }
  int Alpha(MachineId h, NodeId i, NodeId j) const { return alpha_[(h * N_ + i) * N_ + j]; }
  int T(NodeId i) const { return t_[i]; }
  int Gamma(MachineId h, int a, int b) const {
    const MArc& p = marcs_[a];
    const MArc& q = marcs_[b];
    if (pre_.gamma_dropped({h, p.i, p.j, q.i, q.j})) return -1;
    return model_.FindVar(Name({"gam", S(h), S(p.i), S(p.j), S(q.i), S(q.j)}));
  }

  void Row(std::string name, std::string family, std::vector<LinearTerm> terms, Sense sense, double rhs,
           bool big_m = false) {
    LinearRow r;
    r.name = std::move(name);
    r.family = std::move(family);
    r.terms = std::move(terms);
    r.sense = sense;
    r.rhs = rhs;
    r.big_m = big_m;
    model_.AddRow(std::move(r));
  }

  std::vector<MachineId> Common(int a, int b) const {
    std::vector<MachineId> out;
    const auto h1 = pre_.eligible(marcs_[a].i, marcs_[a].j);
    const auto h2 = pre_.eligible(marcs_[b].i, marcs_[b].j);
    for (MachineId h : h1) {
      if (std::find(h2.begin(), h2.end(), h) != h2.end()) out.push_back(h);
    }
    return out;
  }

  void CollectArcs() {
    for (NodeId i = 0; i < N_; ++i) {
      for (NodeId j = 0; j < N_; ++j) {
        if (Kept(i, j) && inst_.is_machine_arc(i, j) && !pre_.eligible(i, j).empty()) marcs_.push_back({i, j});
      }
    }
  }

  void AddVariables() {
    x_.assign(K_ * N_ * N_, -1);
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = 0; i < N_; ++i) {
        for (NodeId j = 0; j < N_; ++j) {
          if (Kept(i, j)) x_[(k * N_ + i) * N_ + j] = model_.AddVar(Name({"x", S(k), S(i), S(j)}), VarType::kBinary, 0, 1);
        }
      }
    }
    z_.assign(K_ * N_, -1);
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = 0; i < N_; ++i) z_[k * N_ + i] = model_.AddVar(Name({"z", S(k), S(i)}), VarType::kContinuous, 0, kInf);
    }
    t_.assign(N_, -1);
    for (NodeId i = 1; i <= 2 * n_; ++i) {
      t_[i] = model_.AddVar(Name({"t", S(i)}), VarType::kContinuous, pre_.windows[i].open, pre_.windows[i].close);
    }
    const TimeWindow dw = inst_.depot_window();
    for (int k = 0; k < K_; ++k) {
      t0_.push_back(model_.AddVar(Name({"t0", S(k)}), VarType::kContinuous, dw.open, dw.close));
      tend_.push_back(model_.AddVar(Name({"tend", S(k)}), VarType::kContinuous, dw.open, dw.close));
      c_.push_back(model_.AddVar(Name({"C", S(k)}), VarType::kContinuous, 0, kInf));
    }
    phi_.assign(H_ * N_ * N_, -1);
    alpha_.assign(H_ * N_ * N_, -1);
    for (const MArc& a : marcs_) {
      for (MachineId h : pre_.eligible(a.i, a.j)) {
        phi_[(h * N_ + a.i) * N_ + a.j] = model_.AddVar(Name({"phi", S(h), S(a.i), S(a.j)}), VarType::kBinary, 0, 1);
      }
    }
    for (const MArc& a : marcs_) {
      for (MachineId h : pre_.eligible(a.i, a.j)) {
        alpha_[(h * N_ + a.i) * N_ + a.j] =
            model_.AddVar(Name({"alpha", S(h), S(a.i), S(a.j)}), VarType::kContinuous, 0, kInf);
      }
    }
    const int A = static_cast<int>(marcs_.size());
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) {
        if (a == b) continue;
        for (MachineId h : Common(a, b)) {
          const MArc& p = marcs_[a];
          const MArc& q = marcs_[b];
          if (pre_.gamma_dropped({h, p.i, p.j, q.i, q.j})) continue;
          model_.AddVar(Name({"gam", S(h), S(p.i), S(p.j), S(q.i), S(q.j)}), VarType::kBinary, 0, 1);
        }
      }
    }
    for (int k = 0; k < K_; ++k) model_.objective.push_back({c_[k], 1.0});
  }

  std::vector<LinearTerm> InArcs(int k, NodeId i, double coef) const {
    std::vector<LinearTerm> terms;
    for (NodeId j = 0; j < N_; ++j) {
      if (Kept(j, i)) terms.push_back({X(k, j, i), coef});
    }
    return terms;
  }

  void AddRouting() {
    const double M1 = M_[1];
    for (int k = 0; k < K_; ++k) {
      std::vector<LinearTerm> out;
      for (NodeId j = 1; j <= n_; ++j) {
        if (Kept(0, j)) out.push_back({X(k, 0, j), 1});
      }
      if (Kept(0, end_)) out.push_back({X(k, 0, end_), 1});
      Row(Name({"r_depart", S(k)}), "base", out, Sense::kEq, 1);
    }
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = 1; i <= 2 * n_; ++i) {
        auto terms = InArcs(k, i, 1);
        for (NodeId j = 0; j < N_; ++j) {
          if (Kept(i, j)) terms.push_back({X(k, i, j), -1});
        }
        Row(Name({"r_flow", S(k), S(i)}), "base", terms, Sense::kEq, 0);
      }
    }
    for (int k = 0; k < K_; ++k) {
      std::vector<LinearTerm> in;
      for (NodeId j = n_ + 1; j <= 2 * n_; ++j) {
        if (Kept(j, end_)) in.push_back({X(k, j, end_), 1});
      }
      if (Kept(0, end_)) in.push_back({X(k, 0, end_), 1});
      Row(Name({"r_return", S(k)}), "base", in, Sense::kEq, 1);
    }
    for (NodeId i = 1; i <= 2 * n_; ++i) {
      std::vector<LinearTerm> terms;
      for (int k = 0; k < K_; ++k) {
        auto in = InArcs(k, i, 1);
        terms.insert(terms.end(), in.begin(), in.end());
      }
      Row(Name({"r_cover", S(i)}), "base", terms, Sense::kEq, 1);
    }
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = 1; i <= n_; ++i) {
        auto terms = InArcs(k, i, 1);
        auto d = InArcs(k, n_ + i, -1);
        terms.insert(terms.end(), d.begin(), d.end());
        Row(Name({"r_pair", S(k), S(i)}), "base", terms, Sense::kEq, 0);
      }
    }
    for (int k = 0; k < K_; ++k) {
      Row(Name({"r_load0", S(k)}), "base", {{z_[k * N_], 1}}, Sense::kEq, 0);
    }
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = 0; i < N_; ++i) {
        for (NodeId j = 0; j < N_; ++j) {
          if (!Kept(i, j)) continue;
          const double q = inst_.demand(j);
          const int zi = z_[k * N_ + i], zj = z_[k * N_ + j], x = X(k, i, j);
          Row(Name({"r_loadlb", S(k), S(i), S(j)}), "base", {{zj, 1}, {zi, -1}, {x, -M1}}, Sense::kGe, q - M1, true);
          Row(Name({"r_loadub", S(k), S(i), S(j)}), "base", {{zj, 1}, {zi, -1}, {x, M1}}, Sense::kLe, q + M1, true);
        }
      }
    }
    for (int k = 0; k < K_; ++k) {
      const double Q = inst_.vehicle(k).capacity;
      for (NodeId i = 1; i <= 2 * n_; ++i) {
        const double cap = std::min(Q, std::max(0.0, Q + inst_.demand(i)));
        auto terms = InArcs(k, i, -cap);
        terms.push_back({z_[k * N_ + i], 1});
        Row(Name({"r_cap", S(k), S(i)}), "base", terms, Sense::kLe, 0);
      }
      for (NodeId i = 1; i <= n_; ++i) {
        auto terms = InArcs(k, i, -static_cast<double>(inst_.demand(i)));
        terms.push_back({z_[k * N_ + i], 1});
        Row(Name({"r_loadmin", S(k), S(i)}), "base", terms, Sense::kGe, 0);
      }
    }
  }

  void AddScheduling() {
    const double M2 = M_[2], M3 = M_[3];
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = 1; i <= 2 * n_; ++i) {
        for (NodeId j = 1; j <= 2 * n_; ++j) {
          if (!Kept(i, j)) continue;
          const double c = inst_.service(i) + inst_.travel(k, i, j);
          Row(Name({"s_chain", S(k), S(i), S(j)}), "base", {{T(j), 1}, {T(i), -1}, {X(k, i, j), -M2}}, Sense::kGe,
              c - M2, true);
        }
      }
      for (NodeId j = 1; j <= n_; ++j) {
        if (!Kept(0, j)) continue;
        Row(Name({"s_depart", S(k), S(j)}), "base", {{T(j), 1}, {t0_[k], -1}, {X(k, 0, j), -M3}}, Sense::kGe,
            inst_.travel(k, 0, j) - M3, true);
      }
    }
    for (NodeId i = 1; i <= n_; ++i) {
      std::vector<LinearTerm> terms{{T(n_ + i), 1}, {T(i), -1}};
      for (int k = 0; k < K_; ++k) {
        auto in = InArcs(k, i, -bounds_.closure(k, i, n_ + i));
        terms.insert(terms.end(), in.begin(), in.end());
      }
      Row(Name({"s_prec", S(i)}), "base", terms, Sense::kGe, inst_.service(i));
    }
    for (int k = 0; k < K_; ++k) {
      for (NodeId i = n_ + 1; i <= 2 * n_; ++i) {
        if (!Kept(i, end_)) continue;
        Row(Name({"s_return", S(k), S(i)}), "base", {{tend_[k], 1}, {T(i), -1}, {X(k, i, end_), -M2}}, Sense::kGe,
            inst_.service(i) + inst_.travel(k, i, end_) - M2, true);
      }
      Row(Name({"s_compl", S(k)}), "base", {{c_[k], 1}, {tend_[k], -1}, {t0_[k], 1}}, Sense::kGe, 0);
      Row(Name({"s_order", S(k)}), "base", {{tend_[k], 1}, {t0_[k], -1}}, Sense::kGe, 0);
    }
  }

  void AddMachines() {
    const double M4 = M_[4], M5 = M_[5], M6 = M_[6], M7 = M_[7], M8 = M_[8];
    for (const MArc& a : marcs_) {
      std::vector<LinearTerm> terms;
      for (MachineId h : pre_.eligible(a.i, a.j)) terms.push_back({Phi(h, a.i, a.j), 1});
      for (int k = 0; k < K_; ++k) terms.push_back({X(k, a.i, a.j), -1});
      Row(Name({"m_use", S(a.i), S(a.j)}), "base", terms, Sense::kEq, 0);
    }
    for (const MArc& a : marcs_) {
      for (MachineId h : pre_.eligible(a.i, a.j)) {
        const int al = Alpha(h, a.i, a.j), ph = Phi(h, a.i, a.j);
        const double o = inst_.crossing_between(h, a.i, a.j);
        for (int k = 0; k < K_; ++k) {
          const int x = X(k, a.i, a.j);
          if (a.i != 0) {
            Row(Name({"m_board", S(h), S(k), S(a.i), S(a.j)}), "base", {{al, 1}, {T(a.i), -1}, {ph, -M4}, {x, -M4}},
                Sense::kGe, inst_.service(a.i) + inst_.approach(k, a.i, h) - 2 * M4, true);
          } else if (inst_.is_pickup(a.j)) {
            Row(Name({"m_board0", S(h), S(k), S(a.j)}), "base", {{al, 1}, {t0_[k], -1}, {ph, -M5}, {x, -M5}},
                Sense::kGe, inst_.approach(k, 0, h) - 2 * M5, true);
          }
          if (inst_.is_customer(a.j)) {
            Row(Name({"m_alight", S(h), S(k), S(a.i), S(a.j)}), "base", {{T(a.j), 1}, {al, -1}, {ph, -M6}, {x, -M6}},
                Sense::kGe, o + inst_.approach(k, a.j, h) - 2 * M6, true);
          } else if (a.j == end_ && inst_.is_delivery(a.i)) {
            Row(Name({"m_return", S(h), S(k), S(a.i)}), "base", {{tend_[k], 1}, {al, -1}, {ph, -M4}, {x, -M4}},
                Sense::kGe, o + inst_.approach(k, end_, h) - 2 * M4, true);
          }
        }
        Row(Name({"m_init", S(h), S(a.i), S(a.j)}), "base", {{al, 1}, {ph, -M8}}, Sense::kGe,
            inst_.initial_reposition(h, a.i) - M8, true);
      }
    }
    const int A = static_cast<int>(marcs_.size());
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) {
        if (a == b) continue;
        const MArc& p = marcs_[a];
        const MArc& q = marcs_[b];
        for (MachineId h : Common(a, b)) {
          const std::string idx = Name({S(h), S(p.i), S(p.j), S(q.i), S(q.j)});
          const int g_ab = Gamma(h, a, b), g_ba = Gamma(h, b, a);
          const int phi_a = Phi(h, p.i, p.j), phi_b = Phi(h, q.i, q.j);
          if (a < b) {
            std::vector<LinearTerm> terms{{phi_a, -1}, {phi_b, -1}};
            if (g_ab >= 0) terms.push_back({g_ab, 1});
            if (g_ba >= 0) terms.push_back({g_ba, 1});
            Row("m_order_" + idx, "base", terms, Sense::kGe, -1);
          }
          if (g_ab >= 0) Row("m_gam1_" + idx, "base", {{g_ab, 1}, {phi_a, -1}}, Sense::kLe, 0);
          if (g_ba >= 0) Row("m_gam2_" + idx, "base", {{g_ba, 1}, {phi_a, -1}}, Sense::kLe, 0);
          if (g_ab >= 0) {
            const double gap = inst_.crossing_between(h, p.i, p.j) + inst_.crossing_between(h, p.j, q.i);
            Row("m_space_" + idx, "base", {{Alpha(h, q.i, q.j), 1}, {Alpha(h, p.i, p.j), -1}, {g_ab, -M7}}, Sense::kGe,
                gap - M7, true);
          }
        }
      }
    }
  }

  // Two-arc path checks with consecutive travel times and shrunk windows.
  bool PathInfeasible(int k, NodeId a, NodeId b, NodeId c) const {
    const NodeId path[3] = {a, b, c};
    return !PathEarliestArrival(inst_, k, path, pre_.windows[a].open, pre_.windows).feasible;
  }

  void AddInequalities() {
    const auto& w = pre_.windows;
    if (vis_.enabled(ViFamily::kIdle) && Kept(0, end_)) {
      for (int k = 0; k < K_; ++k) {
        for (NodeId i = 1; i <= 2 * n_; ++i) {
          auto terms = InArcs(k, i, 1);
          terms.push_back({X(k, 0, end_), 1});
          Row(Name({"idle", S(k), S(i)}), "idle", terms, Sense::kLe, 1);
        }
      }
    }
    if (vis_.enabled(ViFamily::kArcPair)) {
      for (NodeId i = 0; i < N_; ++i) {
        for (NodeId j = i + 1; j < N_; ++j) {
          if (!Kept(i, j) || !Kept(j, i)) continue;
          std::vector<LinearTerm> terms;
          for (int k = 0; k < K_; ++k) {
            terms.push_back({X(k, i, j), 1});
            terms.push_back({X(k, j, i), 1});
          }
          Row(Name({"arc_pair", S(i), S(j)}), "arc_pair", terms, Sense::kLe, 1);
        }
      }
    }
    if (vis_.enabled(ViFamily::kCrossPair)) {
      for (const MArc& a : marcs_) {
        if (a.i >= a.j || pre_.eligible(a.j, a.i).empty() || !Kept(a.j, a.i)) continue;
        std::vector<LinearTerm> terms;
        for (MachineId h : pre_.eligible(a.i, a.j)) terms.push_back({Phi(h, a.i, a.j), 1});
        for (MachineId h : pre_.eligible(a.j, a.i)) terms.push_back({Phi(h, a.j, a.i), 1});
        Row(Name({"cross_pair", S(a.i), S(a.j)}), "cross_pair", terms, Sense::kLe, 1);
      }
    }
    const int A = static_cast<int>(marcs_.size());
    if (vis_.enabled(ViFamily::kOrderPair)) {
      for (int a = 0; a < A; ++a) {
        for (int b = a + 1; b < A; ++b) {
          for (MachineId h : Common(a, b)) {
            const int g_ab = Gamma(h, a, b), g_ba = Gamma(h, b, a);
            if (g_ab < 0 || g_ba < 0) continue;
            const MArc& p = marcs_[a];
            const MArc& q = marcs_[b];
            Row(Name({"order_pair", S(h), S(p.i), S(p.j), S(q.i), S(q.j)}), "order_pair", {{g_ab, 1}, {g_ba, 1}}, Sense::kLe, 1);
          }
        }
      }
    }
    if (vis_.enabled(ViFamily::kVehiclePath) || vis_.enabled(ViFamily::kMachinePath)) {
      for (NodeId a = 0; a < N_; ++a) {
        for (NodeId b = 0; b < N_; ++b) {
          if (!Kept(a, b)) continue;
          for (NodeId c = 0; c < N_; ++c) {
            if (c == a || !Kept(b, c)) continue;
            bool all = true;
            for (int k = 0; k < K_; ++k) {
              const bool bad = PathInfeasible(k, a, b, c);
              all &= bad;
              if (bad && vis_.enabled(ViFamily::kVehiclePath)) {
                Row(Name({"vehicle_path", S(k), S(a), S(b), S(c)}), "vehicle_path", {{X(k, a, b), 1}, {X(k, b, c), 1}}, Sense::kLe, 1);
              }
            }
            const bool machine_path = inst_.is_machine_arc(a, b) && inst_.is_machine_arc(b, c) &&
                                      !pre_.eligible(a, b).empty() && !pre_.eligible(b, c).empty();
            if (all && machine_path && vis_.enabled(ViFamily::kMachinePath)) {
              std::vector<LinearTerm> terms;
              for (MachineId h : pre_.eligible(a, b)) terms.push_back({Phi(h, a, b), 1});
              for (MachineId h : pre_.eligible(b, c)) terms.push_back({Phi(h, b, c), 1});
              Row(Name({"machine_path", S(a), S(b), S(c)}), "machine_path", terms, Sense::kLe, 1);
            }
          }
        }
      }
    }
    if (vis_.enabled(ViFamily::kStartLb)) {
      for (NodeId j = 1; j <= 2 * n_; ++j) {
        std::vector<LinearTerm> terms{{T(j), 1}};
        for (NodeId i = 0; i < N_; ++i) {
          if (!Kept(i, j)) continue;
          for (int k = 0; k < K_; ++k) {
            terms.push_back({X(k, i, j), -(w[i].open + inst_.service(i) + inst_.travel(k, i, j))});
          }
        }
        Row(Name({"start_lb", S(j)}), "start_lb", terms, Sense::kGe, 0);
      }
    }
    for (const MArc& a : marcs_) {
      for (MachineId h : pre_.eligible(a.i, a.j)) {
        const int al = Alpha(h, a.i, a.j);
        const double o = inst_.crossing_between(h, a.i, a.j);
        const std::string idx = Name({S(h), S(a.i), S(a.j)});
        if (vis_.enabled(ViFamily::kBoardLb)) {
          Row("board_lb_" + idx, "board_lb", {{al, 1}}, Sense::kGe, w[a.i].open + inst_.service(a.i) + inst_.min_approach(a.i, h));
        }
        if (vis_.enabled(ViFamily::kBoardUb)) {
          Row("board_ub_" + idx, "board_ub", {{al, 1}}, Sense::kLe, w[a.j].close - inst_.min_approach(a.j, h) - o);
        }
        if (vis_.enabled(ViFamily::kBoardArcLb)) {
          std::vector<LinearTerm> terms{{al, 1}};
          for (int k = 0; k < K_; ++k) terms.push_back({X(k, a.i, a.j), -inst_.approach(k, a.i, h)});
          Row("board_arc_lb_" + idx, "board_arc_lb", terms, Sense::kGe, w[a.i].open + inst_.service(a.i));
        }
        if (vis_.enabled(ViFamily::kBoardArcUb)) {
          std::vector<LinearTerm> terms{{al, 1}};
          for (int k = 0; k < K_; ++k) terms.push_back({X(k, a.i, a.j), inst_.approach(k, a.j, h) + o});
          Row("board_arc_ub_" + idx, "board_arc_ub", terms, Sense::kLe, w[a.j].close);
        }
      }
    }
    if (vis_.enabled(ViFamily::kSuccession)) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) {
          if (a == b) continue;
          const MArc& p = marcs_[a];
          const MArc& q = marcs_[b];
          for (MachineId h : Common(a, b)) {
            if (!MuIndicator(inst_, w, h, p.i, p.j, q.i)) continue;
            const double gap = inst_.crossing_between(h, p.i, p.j) + inst_.crossing_between(h, p.j, q.i);
            Row(Name({"succession", S(h), S(p.i), S(p.j), S(q.i), S(q.j)}), "succession",
                {{Alpha(h, q.i, q.j), 1}, {Alpha(h, p.i, p.j), -1}}, Sense::kGe, gap);
          }
        }
      }
    }
  }

  const Instance& inst_;
  const PreprocessResult& pre_;
  ViConfig vis_;
  BigM M_;
  TravelBounds bounds_;
  int N_ = 0, K_ = 0, H_ = 0, n_ = 0;
  NodeId end_ = 0;
  LinearModel model_;
  std::vector<MArc> marcs_;
  std::vector<int> x_, z_, t_, t0_, tend_, c_, phi_, alpha_;
};

}  // namespace

LinearModel BuildMip(const Instance& inst, const PreprocessResult& pre, const ViConfig& vis) {
  return MipBuilder(inst, pre, vis).Build();
}

std::vector<double> LiftSolution(const LinearModel& model, const Instance& inst, const PreprocessResult& pre,
                                 const Solution& sol) {
  std::vector<double> v(model.vars.size(), 0.0);
  auto set = [&](const std::string& name, double value) {
    const int id = model.FindVar(name);
    if (id < 0) throw std::invalid_argument("solution uses a variable absent from the model: " + name);
    v[id] = value;
  };
  const int K = inst.num_vehicles();
  const NodeId end = inst.depot_end();
  const int N = inst.num_nodes();
  std::vector<std::vector<int>> arc_vehicle(N, std::vector<int>(N, -1));
  for (int k = 0; k < K; ++k) {
    const auto& r = sol.routes[k];
    for (std::size_t p = 0; p + 1 < r.size(); ++p) {
      set(Name({"x", S(k), S(r[p].node), S(r[p + 1].node)}), 1.0);
      arc_vehicle[r[p].node][r[p + 1].node] = k;
    }
    for (const Visit& vis : r) {
      if (vis.node != 0 && vis.node != end) {
        set(Name({"z", S(k), S(vis.node)}), vis.load);
        set(Name({"t", S(vis.node)}), vis.start);
      }
    }
    set(Name({"t0", S(k)}), r.front().start);
    set(Name({"tend", S(k)}), r.back().start);
    set(Name({"C", S(k)}), r.back().start - r.front().start);
  }
  // Alpha defaults: the tightest valid lower bound for unused crossings.
  for (std::size_t id = 0; id < model.vars.size(); ++id) {
    const std::string& name = model.vars[id].name;
    if (name.rfind("alpha_", 0) != 0) continue;
    int h, i, j;
    if (std::sscanf(name.c_str(), "alpha_%d_%d_%d", &h, &i, &j) != 3) continue;
    double lb = pre.windows[i].open + inst.service(i) + inst.min_approach(i, h);
    if (arc_vehicle[i][j] >= 0) {
      lb = std::max(lb, pre.windows[i].open + inst.service(i) + inst.approach(arc_vehicle[i][j], i, h));
    }
    v[id] = lb;
  }
  for (int h = 0; h < inst.num_machines(); ++h) {
    const auto& seq = sol.machines[h];
    for (std::size_t a = 0; a < seq.size(); ++a) {
      set(Name({"phi", S(h), S(seq[a].from), S(seq[a].to)}), 1.0);
      set(Name({"alpha", S(h), S(seq[a].from), S(seq[a].to)}), seq[a].start);
      for (std::size_t b = a + 1; b < seq.size(); ++b) {
        const std::string g = Name({"gam", S(h), S(seq[a].from), S(seq[a].to), S(seq[b].from), S(seq[b].to)});
        if (model.FindVar(g) >= 0) {
          v[model.FindVar(g)] = 1.0;
        } else {
          throw std::invalid_argument("solution orders a dropped machine pair: " + g);
        }
      }
    }
  }
  return v;
}

std::vector<RowCheck> ViolatedRows(const LinearModel& model, const std::vector<double>& values, double tol) {
  std::vector<RowCheck> out;
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const double s = RowSlack(model.rows[r], values);
    if (s < -tol) out.push_back({static_cast<int>(r), s});
  }
  for (std::size_t v = 0; v < model.vars.size(); ++v) {
    const double lo = model.vars[v].lower - values[v];
    const double hi = values[v] - model.vars[v].upper;
    if (lo > tol || hi > tol) out.push_back({-1 - static_cast<int>(v), -std::max(lo, hi)});
  }
  return out;
}

}  // namespace pdptwse
