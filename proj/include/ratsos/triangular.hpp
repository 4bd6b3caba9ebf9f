#pragma once

// Degree-descending triangular solve for rational SOS certificates.
//
// For a support s_0 < ... < s_{m-1} = N and monic target p (deg 2N) the
// certificate has one square per support power:
//
//   p = (t^N + sum_{i<m-1} a_{m-1,i} t^{s_i})^2
//     + sum_{0<j<m-1} d_j (t^{s_j} + sum_{i<j} a_{j,i} t^{s_i})^2
//     + delta * t^{2 s_0}
//
// Matching coefficients from t^{2N-1} downwards, every unknown first appears
// in exactly one equation where it enters linearly.  Diagonal multipliers d_j
// and interior ("core") coefficients are chosen from grids; the remaining
// ("border") coefficients and delta are solved exactly.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ratsos/certificate.hpp"
#include "ratsos/positivity.hpp"
#include "ratsos/rational.hpp"
#include "ratsos/support.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

enum class Strategy { core_zero, full_grid, monte_carlo, banded };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::core_zero: return "core_zero";
    case Strategy::full_grid: return "full_grid";
    case Strategy::monte_carlo: return "monte_carlo";
    case Strategy::banded: return "banded";
  }
  return "?";
}

inline std::optional<Strategy> strategy_from_string(const std::string& s) {
  if (s == "core_zero") return Strategy::core_zero;
  if (s == "full_grid") return Strategy::full_grid;
  if (s == "monte_carlo") return Strategy::monte_carlo;
  if (s == "banded") return Strategy::banded;
  return std::nullopt;
}

/// Which unknowns are free, fixed to zero or solved.
enum class Layout {
  standard,   // free diagonals and free interior coefficients
  core_zero,  // free diagonals, interior coefficients fixed to 0
  banded,     // each square t^{s_j} + a t^{s_{j-1}}, multipliers solved
};

inline std::vector<Rational> default_diagonal_grid() {
  return {Rational(1, 4), Rational(1, 2), Rational(1), Rational(9, 4), Rational(4)};
}

inline std::vector<Rational> default_core_grid() {
  return {Rational(0),     Rational(1, 2), Rational(-1, 2), Rational(1), Rational(-1),
          Rational(3, 2),  Rational(-3, 2), Rational(2),    Rational(-2)};
}

struct SearchConfig {
  Strategy strategy = Strategy::core_zero;
  std::vector<Rational> diagonal_grid = default_diagonal_grid();
  std::vector<Rational> core_grid = default_core_grid();
  std::uint64_t max_points = 1000000;
  std::uint64_t seed = 0;
  bool deterministic = true;
};

/// (square power, slot power) -> coefficient of t^{slot} in the monic square.
using CoreAssignment = std::map<std::pair<std::uint32_t, std::uint32_t>, Rational>;

/// A grid point: multipliers of the middle squares (highest square first) and
/// interior coefficients in monic coordinates.
struct Assignment {
  std::vector<Rational> diagonal;
  CoreAssignment core;

  /// Converts lower-triangular entries (diagonal entries a_{j,j}, interior
  /// entries a_{j,i}) to multiplier form: d_j = a_{j,j}^2, core a_{j,i}/a_{j,j}.
  static Assignment from_entries(const std::vector<Rational>& diagonal_entries,
                                 const std::vector<std::uint32_t>& middle_powers,
                                 const CoreAssignment& raw_core) {
    if (diagonal_entries.size() != middle_powers.size())
      throw std::invalid_argument("one diagonal entry per middle square expected");
    Assignment a;
    std::map<std::uint32_t, Rational> entry_of;
    for (std::size_t k = 0; k < diagonal_entries.size(); ++k) {
      a.diagonal.push_back(diagonal_entries[k] * diagonal_entries[k]);
      entry_of[middle_powers[k]] = diagonal_entries[k];
    }
    for (const auto& [key, v] : raw_core) {
      auto it = entry_of.find(key.first);
      if (it == entry_of.end() || it->second.is_zero())
        throw std::invalid_argument("interior entry on a square without a nonzero diagonal entry");
      a.core[key] = v / it->second;
    }
    return a;
  }
};

struct TriangularScheme {
  SupportSet support;
  Rational scale{1};
  std::vector<Rational> diagonal;  // middle multipliers, highest square first
  CoreAssignment core;             // grid-chosen interior coefficients
  CoreAssignment border;           // solved coefficients
};

struct SolveOutcome {
  TriangularScheme scheme;
  Rational constant_square;  // multiplier of t^{2 s_0}
  UniCertificate certificate;
};

enum class RejectReason {
  equation_violated,
  negative_constant,
  negative_diagonal,
  under_determined,
  nonvanishing_at_root,  // a square with positive multiplier is nonzero at a real root
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::equation_violated: return "equation_violated";
    case RejectReason::negative_constant: return "negative_constant";
    case RejectReason::negative_diagonal: return "negative_diagonal";
    case RejectReason::under_determined: return "under_determined";
    case RejectReason::nonvanishing_at_root: return "nonvanishing_at_root";
  }
  return "?";
}

struct Rejection {
  RejectReason reason = RejectReason::equation_violated;
  std::uint32_t exponent = 0;
  Rational value;  // residual, negative multiplier, or the offending constant
};

/// An equation that forces a sum of nonnegative terms to equal a negative number.
struct InfeasibilityWitness {
  std::uint32_t exponent = 0;
  Rational forced_value;
  std::string explanation;
};

struct Exhausted {
  std::uint64_t points_tested = 0;
  std::string reason;
};

using SearchResult = std::variant<SolveOutcome, InfeasibilityWitness, Exhausted>;
using AcceptFn = std::function<bool(const SolveOutcome&)>;

namespace detail {

class TriangularEngine {
 public:
  enum class Role { leading, solved, free_var, zero, fixed_one };

  struct FreeVar {
    bool is_diagonal = false;
    std::size_t square = 0;
    std::size_t slot = 0;
    std::uint32_t first_exponent = 0;
  };

  /// With `promote`, an equation that has no border unknown solves one of the
  /// free unknowns first appearing there (a multiplier if any, else the
  /// highest interior coefficient) instead of only checking it.
  TriangularEngine(const UniPoly& p, const SupportSet& support, Layout layout, bool promote = false)
      : support_(support), layout_(layout), promote_(promote) {
    if (p.is_zero() || p.degree() % 2 != 0 || p.leading().sign() <= 0)
      throw std::invalid_argument("triangular solve needs even degree and positive leading coefficient");
    if (support.empty() || 2 * static_cast<std::int64_t>(support.top()) != p.degree())
      throw std::invalid_argument("support top power must be half the degree");
    scale_ = p.leading();
    const Rational inv = Rational(1) / scale_;
    for (const auto& c : p.coeffs()) target_.push_back(c * inv);
    build_layout();
  }

  std::size_t squares() const { return support_.size(); }
  const std::vector<FreeVar>& free_vars() const { return free_; }
  const std::vector<std::size_t>& middle_squares() const { return middle_; }
  Role slot_role(std::size_t j, std::size_t i) const { return slot_role_[j][i]; }
  std::uint32_t power(std::size_t j) const { return support_[j]; }

  /// Exponent e whose equation is a sum of nonnegative square terms equal to
  /// a negative coefficient; such an equation has no real solution at all.
  std::optional<InfeasibilityWitness> diagonal_contradiction() const {
    for (std::int64_t e = top_exponent() - 1; e >= 0; --e) {
      const Rational& c = target(static_cast<std::uint32_t>(e));
      if (c.sign() >= 0) continue;
      bool all_squares = true;
      std::string lhs;
      for (const auto& pr : general_pairs_[static_cast<std::size_t>(e)]) {
        if (pr.a != pr.b) {
          all_squares = false;
          break;
        }
        if (!lhs.empty()) lhs += " + ";
        lhs += term_name(pr.j, pr.a);
      }
      if (!all_squares) continue;
      InfeasibilityWitness w;
      w.exponent = static_cast<std::uint32_t>(e);
      w.forced_value = c;
      w.explanation = "coefficient of t^" + std::to_string(e) + ": " +
                      (lhs.empty() ? std::string("0") : lhs) + " = " + c.str() +
                      " has no real solution";
      return w;
    }
    return std::nullopt;
  }

  /// Exponent with a nonzero target but no contributing products at all.
  std::optional<std::uint32_t> unreachable_exponent() const {
    for (std::int64_t e = top_exponent() - 1; e >= 0; --e) {
      if (!target(static_cast<std::uint32_t>(e)).is_zero() &&
          general_pairs_[static_cast<std::size_t>(e)].empty())
        return static_cast<std::uint32_t>(e);
    }
    return std::nullopt;
  }

  /// Evaluates a full point given as values in free-variable order.
  std::variant<SolveOutcome, Rejection> evaluate(const std::vector<Rational>& values) {
    reset();
    std::size_t next_free = 0;
    for (const auto& ev : events_) {
      if (ev.kind == Event::Kind::free_var) {
        assign_free(static_cast<std::size_t>(ev.free_index), values.at(next_free++));
        continue;
      }
      if (auto rej = apply(ev)) return *rej;
    }
    return outcome();
  }

  /// Depth-first enumeration of the free variables over their grids in
  /// canonical order, pruning at the first failed equation.
  SearchResult enumerate(const std::vector<Rational>& diag_grid, const std::vector<Rational>& core_grid,
                         std::uint64_t max_points, const AcceptFn& accept) {
    reset();
    diag_grid_ = &diag_grid;
    core_grid_ = &core_grid;
    auto range = [](const std::vector<Rational>& g) {
      auto [lo, hi] = std::minmax_element(g.begin(), g.end());
      return Interval{lo->gmp(), hi->gmp()};
    };
    diag_range_ = range(diag_grid);
    core_range_ = range(core_grid);
    points_ = 0;
    max_points_ = max_points;
    accept_ = &accept;
    found_.reset();
    budget_hit_ = false;
    dfs(0);
    if (found_) return *found_;
    return Exhausted{points_, budget_hit_ ? "point budget exhausted" : "grid exhausted"};
  }

  std::uint64_t points() const { return points_; }

 private:
  struct Pair {
    std::size_t j, a, b;  // square j, slots a <= b
  };
  struct Event {
    enum class Kind { free_var, equation, vanish_solve, vanish_check };
    Kind kind = Kind::equation;
    std::uint32_t exponent = 0;
    int free_index = -1;
    std::size_t plan = 0;
  };
  // Every square with a positive multiplier vanishes at each real root of p.
  struct VanishPlan {
    std::size_t square = 0;
    std::vector<std::size_t> open;  // slots solved from the root conditions
    std::vector<std::size_t> rows;  // roots used for them
    std::vector<std::vector<Rational>> inverse;
  };

  std::int64_t top_exponent() const { return 2 * static_cast<std::int64_t>(support_.top()); }
  const Rational& target(std::uint32_t e) const {
    static const Rational zero(0);
    return e < target_.size() ? target_[e] : zero;
  }
  std::size_t top() const { return support_.size() - 1; }

  std::string term_name(std::size_t j, std::size_t a) const {
    const std::string coeff = "a(" + std::to_string(power(j)) + "," + std::to_string(power(a)) + ")^2";
    if (j == top()) return a == j ? "1" : coeff;
    if (j == 0) return "delta";
    const std::string d = "d" + std::to_string(power(j));
    return a == j ? d : d + "*" + coeff;
  }

  void build_layout() {
    const std::size_t m = support_.size();
    mult_role_.assign(m, Role::free_var);
    slot_role_.assign(m, {});
    for (std::size_t j = 0; j < m; ++j) {
      slot_role_[j].assign(j + 1, Role::zero);
      slot_role_[j][j] = Role::leading;
      const bool is_top = j == m - 1;
      const bool is_bottom = j == 0 && m > 1;
      if (is_top) {
        mult_role_[j] = Role::fixed_one;
      } else if (is_bottom) {
        mult_role_[j] = Role::solved;
      } else {
        mult_role_[j] = layout_ == Layout::banded ? Role::solved : Role::free_var;
        middle_.push_back(j);
      }
      if (is_bottom) continue;
      for (std::size_t i = 0; i < j; ++i) {
        Role r = Role::zero;
        if (layout_ == Layout::banded) {
          r = (i + 1 == j) ? Role::solved : Role::zero;
        } else if (is_top || i == 0) {
          r = Role::solved;
        } else {
          r = layout_ == Layout::standard ? Role::free_var : Role::zero;
        }
        slot_role_[j][i] = r;
      }
    }
    std::reverse(middle_.begin(), middle_.end());

    // Products contributing to each exponent (for every slot, not only active ones).
    general_pairs_.assign(static_cast<std::size_t>(top_exponent()) + 1, {});
    active_pairs_.assign(static_cast<std::size_t>(top_exponent()) + 1, {});
    for (std::size_t j = 0; j < m; ++j) {
      if (j == 0 && m > 1) {
        general_pairs_[2 * power(0)].push_back({0, 0, 0});
        active_pairs_[2 * power(0)].push_back({0, 0, 0});
        continue;
      }
      for (std::size_t a = 0; a <= j; ++a) {
        for (std::size_t b = a; b <= j; ++b) {
          const std::uint32_t ex = power(a) + power(b);
          general_pairs_[ex].push_back({j, a, b});
          if (slot_role_[j][a] != Role::zero && slot_role_[j][b] != Role::zero)
            active_pairs_[ex].push_back({j, a, b});
        }
      }
    }

    // Walk the exponents downwards, deciding for every unknown whether an
    // equation solves it or the search chooses it.
    solved_at_.assign(static_cast<std::size_t>(top_exponent()) + 1, {});
    if (promote_) roots_ = rational_roots(UniPoly(target_));
    root_powers_.assign(m, {});
    for (std::size_t j = 0; j < m; ++j)
      for (const auto& r : roots_) {
        root_powers_[j].emplace_back();
        for (std::size_t i = 0; i <= j; ++i) root_powers_[j].back().push_back(pow(r, power(i)));
      }
    std::vector<bool> mult_known(m);
    std::vector<std::vector<bool>> slot_known(m);
    for (std::size_t j = 0; j < m; ++j) {
      mult_known[j] = mult_role_[j] == Role::fixed_one;
      slot_known[j].assign(j + 1, true);
      for (std::size_t i = 0; i < j; ++i) slot_known[j][i] = slot_role_[j][i] == Role::zero;
    }
    std::vector<bool> vanish_done(m, roots_.empty());
    mult_det_.assign(m, -1);
    slot_det_.assign(m, {});
    for (std::size_t j = 0; j < m; ++j) slot_det_[j].assign(j + 1, -1);
    auto propagate = [&](std::uint32_t e) {
      for (std::size_t jj = m; jj-- > 0;) {
        if (vanish_done[jj] || !mult_known[jj]) continue;
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < jj; ++i)
          if (!slot_known[jj][i]) open.push_back(i);
        if (open.empty()) {
          events_.push_back({Event::Kind::vanish_check, e, -1, plans_.size()});
          plans_.push_back({jj, {}, {}});
          vanish_done[jj] = true;
          continue;
        }
        if (open.size() > roots_.size()) continue;
        auto plan = vanishing_plan(jj, open);
        if (!plan) continue;
        events_.push_back({Event::Kind::vanish_solve, e, -1, plans_.size()});
        plans_.push_back(std::move(*plan));
        for (auto i : open) {
          slot_det_[jj][i] = static_cast<int>(events_.size()) - 1;
          slot_known[jj][i] = true;
          slot_role_[jj][i] = Role::solved;
        }
        vanish_done[jj] = true;
      }
    };
    propagate(static_cast<std::uint32_t>(top_exponent()));
    for (std::int64_t ee = top_exponent() - 1; ee >= 0; --ee) {
      const auto e = static_cast<std::uint32_t>(ee);
      std::vector<FreeVar> fresh;  // unknowns first appearing at e, canonical order
      for (std::size_t j = m; j-- > 0;) {
        if (!mult_known[j] && 2 * power(j) == e) fresh.push_back({true, j, j, e});
        for (std::size_t i = j; i-- > 0;)
          if (!slot_known[j][i] && power(j) + power(i) == e) fresh.push_back({false, j, i, e});
      }
      std::vector<bool> solve(fresh.size(), false);
      bool any = false;
      for (std::size_t q = 0; q < fresh.size(); ++q) {
        const FreeVar& fv = fresh[q];
        const Role r = fv.is_diagonal ? mult_role_[fv.square] : slot_role_[fv.square][fv.slot];
        if (r == Role::solved) solve[q] = any = true;
      }
      if (!any && promote_ && !fresh.empty()) {
        std::size_t pick = 0;
        for (std::size_t q = 0; q < fresh.size(); ++q)
          if (fresh[q].is_diagonal) pick = q;
        solve[pick] = true;
      }
      const int equation_event = static_cast<int>(events_.size() + fresh.size()) -
                                 static_cast<int>(std::count(solve.begin(), solve.end(), true));
      for (std::size_t q = 0; q < fresh.size(); ++q) {
        const FreeVar& fv = fresh[q];
        (fv.is_diagonal ? mult_det_[fv.square] : slot_det_[fv.square][fv.slot]) =
            solve[q] ? equation_event : static_cast<int>(events_.size());
        if (solve[q]) {
          solved_at_[e].push_back({fv.square, fv.slot});
          if (fv.is_diagonal) mult_role_[fv.square] = Role::solved;
          else slot_role_[fv.square][fv.slot] = Role::solved;
        } else {
          events_.push_back({Event::Kind::free_var, e, static_cast<int>(free_.size()), 0});
          free_.push_back(fv);
        }
        if (fv.is_diagonal) mult_known[fv.square] = true;
        else slot_known[fv.square][fv.slot] = true;
      }
      events_.push_back({Event::Kind::equation, e, -1, 0});
      propagate(e);
    }
    plan_bounds();
  }

  // Equations that constrain a sign (a solved multiplier) or are pure checks
  // can be bounded before all of their grid variables are chosen.
  void plan_bounds() {
    bound_at_.assign(events_.size() + 1, {});
    auto is_free = [&](std::size_t j, std::size_t i) {
      const int d = i == j ? mult_det_[j] : slot_det_[j][i];
      return d >= 0 && events_[static_cast<std::size_t>(d)].kind == Event::Kind::free_var;
    };
    for (std::size_t q = 0; q < events_.size(); ++q) {
      const Event& ev = events_[q];
      if (ev.kind != Event::Kind::equation) continue;
      const auto& unknowns = solved_at_[ev.exponent];
      if (unknowns.size() > 1) continue;
      if (unknowns.size() == 1 && unknowns[0].first != unknowns[0].second) continue;
      const std::size_t skip = unknowns.empty() ? support_.size() : unknowns[0].first;
      int ready = 0;
      bool any_free = false;
      std::vector<int> dets;
      for (const auto& pr : active_pairs_[ev.exponent]) {
        if (pr.j == skip) continue;
        const std::pair<std::size_t, std::size_t> factors[3] = {{pr.j, pr.j}, {pr.j, pr.a}, {pr.j, pr.b}};
        for (std::size_t f = 0; f < 3; ++f) {
          const auto [j, i] = factors[f];
          if (f > 0 && i == j) continue;  // leading coefficient 1
          const int d = i == j ? mult_det_[j] : slot_det_[j][i];
          dets.push_back(d);
          if (is_free(j, i)) {
            any_free = true;
            continue;
          }
          ready = std::max(ready, d + 1);
        }
      }
      if (!any_free) continue;
      // Re-check only when something the bound depends on was fixed since
      // the previous branching event.
      int prev = -1;
      for (std::size_t k = 0; k < q; ++k) {
        if (events_[k].kind != Event::Kind::free_var) continue;
        const bool changed = std::any_of(dets.begin(), dets.end(), [&](int d) {
          return d >= prev && d < static_cast<int>(k);
        });
        if (static_cast<int>(k) >= ready && (changed || prev < ready)) bound_at_[k].push_back(q);
        prev = static_cast<int>(k);
      }
    }
  }

  /// Rows of the root conditions that determine the open slots of square j.
  std::optional<VanishPlan> vanishing_plan(std::size_t j, const std::vector<std::size_t>& open) const {
    const std::size_t u = open.size();
    std::vector<std::size_t> rows;
    std::vector<std::vector<Rational>> basis;  // reduced copies of chosen rows
    for (std::size_t r = 0; r < roots_.size() && rows.size() < u; ++r) {
      std::vector<Rational> v;
      for (auto i : open) v.push_back(pow(roots_[r], power(i)));
      for (const auto& b : basis) {
        std::size_t lead = 0;
        while (b[lead].is_zero()) ++lead;
        if (!v[lead].is_zero()) {
          const Rational f = v[lead] / b[lead];
          for (std::size_t c = 0; c < u; ++c) v[c] -= f * b[c];
        }
      }
      if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); })) continue;
      rows.push_back(r);
      basis.push_back(std::move(v));
    }
    if (rows.size() < u) return std::nullopt;
    std::vector<std::vector<Rational>> a(u);
    for (std::size_t k = 0; k < u; ++k)
      for (auto i : open) a[k].push_back(pow(roots_[rows[k]], power(i)));
    return VanishPlan{j, open, rows, invert(std::move(a))};
  }

  /// Inverse of a nonsingular matrix by Gauss-Jordan elimination.
  static std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rational(1);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (a[piv][c].is_zero()) ++piv;
      std::swap(a[piv], a[c]);
      std::swap(inv[piv], inv[c]);
      const Rational d = a[c][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[c][k] /= d;
        inv[c][k] /= d;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c].is_zero()) continue;
        const Rational f = a[r][c];
        for (std::size_t k = 0; k < n; ++k) {
          a[r][k] -= f * a[c][k];
          inv[r][k] -= f * inv[c][k];
        }
      }
    }
    return inv;
  }

  void reset() {
    const std::size_t m = support_.size();
    mult_.assign(m, Rational(0));
    coef_.assign(m, {});
    for (std::size_t j = 0; j < m; ++j) {
      coef_[j].assign(j + 1, Rational(0));
      coef_[j][j] = Rational(1);
      if (mult_role_[j] == Role::fixed_one) mult_[j] = Rational(1);
    }
  }

  void assign_free(std::size_t index, const Rational& v) {
    const FreeVar& fv = free_[index];
    if (fv.is_diagonal)
      mult_[fv.square] = v;
    else
      coef_[fv.square][fv.slot] = v;
  }

  /// Solves or checks the equation at exponent e; nullopt on success.
  std::optional<Rejection> solve_equation(std::uint32_t e) {
    const auto& unknowns = solved_at_[e];
    int active = 0;
    for (const auto& [j, i] : unknowns) {
      if (i == j) {
        mult_[j] = Rational(0);
        ++active;
      } else {
        coef_[j][i] = Rational(0);
        if (!mult_[j].is_zero()) ++active;
      }
    }
    if (active > 1) return Rejection{RejectReason::under_determined, e, Rational(0)};
    mpq_class& rest = acc_;
    rest = 0;
    for (const auto& pr : active_pairs_[e]) {
      const Rational& mu = mult_[pr.j];
      if (mu.is_zero()) continue;
      const Rational& x = coef_[pr.j][pr.a];
      const Rational& y = coef_[pr.j][pr.b];
      if (x.is_zero() || y.is_zero()) continue;
      // Slot pr.b == pr.j holds the leading 1.
      if (pr.b == pr.j) tmp_ = mu.gmp() * x.gmp();
      else {
        tmp_ = mu.gmp() * x.gmp();
        tmp_ *= y.gmp();
      }
      if (pr.a != pr.b) mpq_mul_2exp(tmp_.get_mpq_t(), tmp_.get_mpq_t(), 1);
      rest += tmp_;
    }
    Rational residual(mpq_class(target(e).gmp() - rest));
    for (const auto& [j, i] : unknowns) {
      if (i == j) {
        if (residual.sign() < 0)
          return Rejection{j == 0 ? RejectReason::negative_constant : RejectReason::negative_diagonal, e,
                           residual};
        mult_[j] = residual;
        return std::nullopt;
      }
      if (!mult_[j].is_zero()) {
        coef_[j][i] = residual / (Rational(2) * mult_[j]);
        return std::nullopt;
      }
    }
    if (!residual.is_zero()) return Rejection{RejectReason::equation_violated, e, residual};
    return std::nullopt;
  }

  std::optional<Rejection> apply(const Event& ev) {
    if (ev.kind == Event::Kind::equation) return solve_equation(ev.exponent);
    const VanishPlan& plan = plans_[ev.plan];
    const std::size_t j = plan.square;
    auto& c = coef_[j];
    for (auto i : plan.open) c[i] = Rational(0);
    if (mult_[j].is_zero()) return std::nullopt;
    const auto& rp = root_powers_[j];
    auto value_at = [&](std::size_t r) {
      acc_ = 0;
      for (std::size_t i = 0; i <= j; ++i) {
        if (c[i].is_zero()) continue;
        const Rational& w = rp[r][i];
        if (mpq_cmp_si(w.gmp().get_mpq_t(), 1, 1) == 0) acc_ += c[i].gmp();
        else if (mpq_cmp_si(w.gmp().get_mpq_t(), -1, 1) == 0) acc_ -= c[i].gmp();
        else if (!w.is_zero()) {
          tmp_ = c[i].gmp() * w.gmp();
          acc_ += tmp_;
        }
      }
      return Rational(acc_);
    };
    if (!plan.open.empty()) {
      std::vector<Rational> rhs;
      for (auto r : plan.rows) rhs.push_back(-value_at(r));
      for (std::size_t k = 0; k < plan.open.size(); ++k) {
        Rational v(0);
        for (std::size_t q = 0; q < rhs.size(); ++q) v += plan.inverse[k][q] * rhs[q];
        c[plan.open[k]] = v;
      }
    }
    for (std::size_t r = 0; r < roots_.size(); ++r) {
      Rational v = value_at(r);
      if (!v.is_zero()) return Rejection{RejectReason::nonvanishing_at_root, ev.exponent, std::move(v)};
    }
    return std::nullopt;
  }

  SolveOutcome outcome() const {
    SolveOutcome out;
    TriangularScheme& sc = out.scheme;
    sc.support = support_;
    sc.scale = scale_;
    for (auto j : middle_) sc.diagonal.push_back(mult_[j]);
    UniCertificate& cert = out.certificate;
    cert.scale = scale_;
    cert.support = support_;
    const std::size_t m = support_.size();
    for (std::size_t jj = m; jj-- > 0;) {
      const std::size_t j = jj;
      for (std::size_t i = 0; i < j; ++i) {
        if (slot_role_[j][i] == Role::solved) sc.border[{power(j), power(i)}] = coef_[j][i];
        if (slot_role_[j][i] == Role::free_var) sc.core[{power(j), power(i)}] = coef_[j][i];
      }
      if (j == 0 && m > 1) continue;
      if (mult_[j].is_zero()) continue;
      std::vector<Rational> q(power(j) + 1);
      for (std::size_t i = 0; i <= j; ++i) q[power(i)] = coef_[j][i];
      cert.terms.push_back({mult_[j], UniPoly(std::move(q))});
    }
    out.constant_square = m > 1 ? mult_[0] : Rational(0);
    if (m > 1) {
      if (power(0) == 0)
        cert.constant = mult_[0];
      else if (!mult_[0].is_zero())
        cert.terms.push_back({mult_[0], UniPoly::monomial(Rational(1), power(0))});
    }
    return out;
  }

  struct Interval {
    mpq_class lo, hi;
  };
  // Bounds viewed through pointers; lo == hi for a known value.
  struct Span {
    const mpq_class* lo;
    const mpq_class* hi;
  };

  Span factor(std::size_t j, std::size_t i, std::size_t k) const {
    const int d = i == j ? mult_det_[j] : slot_det_[j][i];
    if (d < static_cast<int>(k)) {
      const mpq_class& v = (i == j ? mult_[j] : coef_[j][i]).gmp();
      return {&v, &v};
    }
    const Interval& r = i == j ? diag_range_ : core_range_;
    return {&r.lo, &r.hi};
  }

  /// out = x * y as an interval.
  void times(Span x, Span y, Interval& out) const {
    if (x.lo == x.hi && y.lo == y.hi) {
      out.lo = *x.lo * *y.lo;
      out.hi = out.lo;
      return;
    }
    if (sgn(*x.lo) >= 0 && sgn(*y.lo) >= 0) {
      out.lo = *x.lo * *y.lo;
      out.hi = *x.hi * *y.hi;
      return;
    }
    auto& c = corners_;
    c[0] = *x.lo * *y.lo;
    c[1] = *x.lo * *y.hi;
    c[2] = *x.hi * *y.lo;
    c[3] = *x.hi * *y.hi;
    out.lo = *std::min_element(c.begin(), c.end());
    out.hi = *std::max_element(c.begin(), c.end());
  }

  /// False when equation event q cannot hold for any completion of the
  /// grid variables still open at event k.
  bool may_hold(std::size_t q, std::size_t k) const {
    const std::uint32_t e = events_[q].exponent;
    const auto& unknowns = solved_at_[e];
    const std::size_t skip = unknowns.empty() ? support_.size() : unknowns[0].first;
    Interval& rest = rest_;
    rest.lo = 0;
    rest.hi = 0;
    for (const auto& pr : active_pairs_[e]) {
      if (pr.j == skip) continue;
      const Span mu = factor(pr.j, pr.j, k);
      if (mu.lo == mu.hi && sgn(*mu.lo) == 0) continue;
      Span xy{&one_, &one_};
      if (pr.a == pr.b) {
        if (pr.a != pr.j) {
          const Span x = factor(pr.j, pr.a, k);
          times(x, x, xy_);
          if (x.lo != x.hi && sgn(*x.lo) <= 0 && sgn(*x.hi) >= 0) xy_.lo = 0;
          xy = {&xy_.lo, &xy_.hi};
        }
      } else {
        const Span x = factor(pr.j, pr.a, k);
        if (pr.b != pr.j) {
          times(x, factor(pr.j, pr.b, k), xy_);
        } else {
          xy_.lo = *x.lo;
          xy_.hi = *x.hi;
        }
        mpq_mul_2exp(xy_.lo.get_mpq_t(), xy_.lo.get_mpq_t(), 1);
        mpq_mul_2exp(xy_.hi.get_mpq_t(), xy_.hi.get_mpq_t(), 1);
        xy = {&xy_.lo, &xy_.hi};
      }
      times(mu, xy, term_);
      rest.lo += term_.lo;
      rest.hi += term_.hi;
    }
    const mpq_class& c = target(e).gmp();
    if (unknowns.empty()) return rest.lo <= c && c <= rest.hi;
    return rest.lo <= c;
  }

  void dfs(std::size_t k) {
    if (found_ || budget_hit_) return;
    for (auto q : bound_at_[k]) {
      if (!may_hold(q, k)) {
        ++points_;
        if (points_ >= max_points_) budget_hit_ = true;
        return;
      }
    }
    if (k == events_.size()) {
      ++points_;
      SolveOutcome out = outcome();
      if ((*accept_)(out)) found_ = std::move(out);
      if (points_ >= max_points_) budget_hit_ = true;
      return;
    }
    const Event& ev = events_[k];
    if (ev.kind != Event::Kind::free_var) {
      if (apply(ev)) {
        ++points_;
        if (points_ >= max_points_) budget_hit_ = true;
        return;
      }
      dfs(k + 1);
      return;
    }
    const FreeVar& fv = free_[static_cast<std::size_t>(ev.free_index)];
    if (!fv.is_diagonal && mult_[fv.square].is_zero()) {
      // Interior values of a vanished square are irrelevant.
      coef_[fv.square][fv.slot] = Rational(0);
      dfs(k + 1);
      return;
    }
    const auto& grid = fv.is_diagonal ? *diag_grid_ : *core_grid_;
    for (const auto& v : grid) {
      assign_free(static_cast<std::size_t>(ev.free_index), v);
      dfs(k + 1);
      if (found_ || budget_hit_) return;
    }
  }

  SupportSet support_;
  Layout layout_;
  bool promote_ = false;
  Rational scale_;
  std::vector<Rational> target_;
  std::vector<Role> mult_role_;
  std::vector<std::vector<Role>> slot_role_;
  std::vector<std::size_t> middle_;
  std::vector<std::vector<Pair>> general_pairs_;
  std::vector<std::vector<Pair>> active_pairs_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> solved_at_;
  std::vector<FreeVar> free_;
  std::vector<Event> events_;
  std::vector<Rational> roots_;
  std::vector<std::vector<std::vector<Rational>>> root_powers_;  // [square][root][slot]
  mpq_class acc_, tmp_;
  std::vector<VanishPlan> plans_;
  std::vector<int> mult_det_;                // event fixing each multiplier, -1 if constant
  std::vector<std::vector<int>> slot_det_;   // same for each slot
  std::vector<std::vector<std::size_t>> bound_at_;
  Interval diag_range_, core_range_;
  const mpq_class one_{1};
  mutable Interval rest_, xy_, term_;
  mutable std::array<mpq_class, 4> corners_;

  std::vector<Rational> mult_;
  std::vector<std::vector<Rational>> coef_;

  const std::vector<Rational>* diag_grid_ = nullptr;
  const std::vector<Rational>* core_grid_ = nullptr;
  const AcceptFn* accept_ = nullptr;
  std::uint64_t points_ = 0;
  std::uint64_t max_points_ = 0;
  std::optional<SolveOutcome> found_;
  bool budget_hit_ = false;
};

inline Layout layout_for(Strategy s) {
  switch (s) {
    case Strategy::core_zero: return Layout::core_zero;
    case Strategy::banded: return Layout::banded;
    default: return Layout::standard;
  }
}

/// Certificate for a constant or the zero polynomial.
inline std::optional<SolveOutcome> trivial_outcome(const UniPoly& p) {
  if (p.degree() > 0) return std::nullopt;
  if (p.degree() == 0 && p.leading().sign() < 0)
    throw std::invalid_argument("negative constant has no certificate");
  SolveOutcome out;
  out.scheme.support = SupportSet{0};
  out.constant_square = p.is_zero() ? Rational(0) : p.leading();
  out.certificate.constant = out.constant_square;
  out.certificate.support = out.scheme.support;
  return out;
}

}  // namespace detail

/// Solves the border unknowns for a fixed grid point.
inline std::variant<SolveOutcome, Rejection> border_solve(const UniPoly& p, const SupportSet& support,
                                                          const Assignment& point,
                                                          Layout layout = Layout::standard) {
  if (auto t = detail::trivial_outcome(p)) return *t;
  detail::TriangularEngine engine(p, support, layout);
  if (layout != Layout::banded && point.diagonal.size() != engine.middle_squares().size())
    throw std::invalid_argument("expected " + std::to_string(engine.middle_squares().size()) +
                                " diagonal multipliers");
  for (const auto& d : point.diagonal)
    if (d.sign() < 0) throw std::invalid_argument("diagonal multipliers must be nonnegative");
  std::map<std::uint32_t, Rational> diag_of;
  for (std::size_t k = 0; k < point.diagonal.size() && k < engine.middle_squares().size(); ++k)
    diag_of[engine.power(engine.middle_squares()[k])] = point.diagonal[k];
  for (const auto& [key, v] : point.core) {
    bool ok = false;
    for (const auto& fv : engine.free_vars())
      if (!fv.is_diagonal && engine.power(fv.square) == key.first && engine.power(fv.slot) == key.second)
        ok = true;
    if (!ok)
      throw std::invalid_argument("(" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                  ") is not a free interior position");
  }
  std::vector<Rational> values;
  for (const auto& fv : engine.free_vars()) {
    if (fv.is_diagonal) {
      values.push_back(diag_of.at(engine.power(fv.square)));
    } else {
      auto it = point.core.find({engine.power(fv.square), engine.power(fv.slot)});
      values.push_back(it == point.core.end() ? Rational(0) : it->second);
    }
  }
  auto result = engine.evaluate(values);
  if (auto* out = std::get_if<SolveOutcome>(&result)) {
    if (!verify(out->certificate, p)) throw std::logic_error("triangular solve produced a non-verifying certificate");
  }
  return result;
}

/// The constant-square value at a grid point, or the rejection.
inline std::variant<Rational, Rejection> delta(const UniPoly& p, const SupportSet& support,
                                               const Assignment& point, Layout layout = Layout::standard) {
  auto r = border_solve(p, support, point, layout);
  if (auto* out = std::get_if<SolveOutcome>(&r)) return out->constant_square;
  return std::get<Rejection>(r);
}

/// Uniform index in [0, n) from one draw of the minimal-standard generator.
inline std::size_t draw_index(std::minstd_rand& rng, std::size_t n) {
  const std::uint64_t v = rng() - std::minstd_rand::min();
  const std::uint64_t range = std::uint64_t{std::minstd_rand::max()} - std::minstd_rand::min() + 1;
  return static_cast<std::size_t>(v * n / range);
}

/// Seeds the generator from a 64-bit seed (reduced modulo 2^31 - 1).
inline std::minstd_rand make_rng(std::uint64_t seed) {
  return std::minstd_rand(static_cast<std::minstd_rand::result_type>(seed % 2147483647ULL));
}

/// Searches grid points until `accept` takes a verifying outcome.
inline SearchResult search(const UniPoly& p, const SupportSet& support, const SearchConfig& config,
                           const AcceptFn& accept) {
  if (config.diagonal_grid.empty() || config.core_grid.empty())
    throw std::invalid_argument("search grids must be nonempty");
  if (config.max_points == 0) throw std::invalid_argument("max_points must be positive");
  for (const auto& d : config.diagonal_grid)
    if (d.sign() < 0) throw std::invalid_argument("diagonal grid values must be nonnegative");

  auto checked_accept = [&](const SolveOutcome& out) {
    if (!verify(out.certificate, p)) throw std::logic_error("triangular solve produced a non-verifying certificate");
    return accept(out);
  };
  const AcceptFn gate = checked_accept;

  if (auto t = detail::trivial_outcome(p)) {
    if (gate(*t)) return *t;
    return Exhausted{1, "grid exhausted"};
  }
  detail::TriangularEngine engine(p, support, detail::layout_for(config.strategy), true);
  if (auto w = engine.diagonal_contradiction()) return *w;
  if (auto e = engine.unreachable_exponent())
    return Exhausted{0, "coefficient of t^" + std::to_string(*e) + " cannot be matched on this support"};

  auto stamp = [&](SearchResult r) {
    if (auto* out = std::get_if<SolveOutcome>(&r)) out->certificate.strategy = to_string(config.strategy);
    return r;
  };

  if (config.strategy != Strategy::monte_carlo)
    return stamp(engine.enumerate(config.diagonal_grid, config.core_grid, config.max_points, gate));

  std::minstd_rand rng = config.deterministic ? make_rng(config.seed) : make_rng(std::random_device{}());
  const auto& fvs = engine.free_vars();
  std::vector<Rational> values(fvs.size());
  for (std::uint64_t n = 1; n <= config.max_points; ++n) {
    for (std::size_t k = 0; k < fvs.size(); ++k) {
      const auto& grid = fvs[k].is_diagonal ? config.diagonal_grid : config.core_grid;
      values[k] = grid[draw_index(rng, grid.size())];
    }
    auto r = engine.evaluate(values);
    if (auto* out = std::get_if<SolveOutcome>(&r)) {
      if (gate(*out)) return stamp(std::move(*out));
    }
  }
  return Exhausted{config.max_points, "point budget exhausted"};
}

inline SearchResult search(const UniPoly& p, const SupportSet& support, const SearchConfig& config) {
  return search(p, support, config, [](const SolveOutcome&) { return true; });
}

/// Every accepted point of a grid search, in canonical order, up to `limit`.
inline std::vector<SolveOutcome> enumerate_solutions(const UniPoly& p, const SupportSet& support,
                                                     const SearchConfig& config, std::size_t limit) {
  std::vector<SolveOutcome> found;
  search(p, support, config, [&](const SolveOutcome& out) {
    found.push_back(out);
    return found.size() >= limit;
  });
  return found;
}

}  // namespace ratsos
