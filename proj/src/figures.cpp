#include "dirtyregion/figures.hpp"

#include <cmath>
#include <stdexcept>

#include "dirtyregion/ic.hpp"
#include "dirtyregion/mac_helper.hpp"
#include "dirtyregion/search.hpp"
#include "dirtyregion/z_ic.hpp"

namespace dirtyregion {

namespace {

using namespace presets;

std::string num(double v) { return std::isfinite(v) ? format_number(v) : "nan"; }

std::string d_label(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", d);
  return buf;
}

FigureOutput fig2_2(ExecPolicy policy) {
  const auto p0s = linspace({0.0, 10.0}, 101);
  auto params = [&](std::size_t i) { return MacHelperParams{p0s[i], kFig22P1, 0.0, kFig22Q}; };
  const auto outer1 =
      map_indices(p0s.size(), [&](std::size_t i) { return rho_star(params(i), kFig22P1).value; },
                  policy);
  const auto inner =
      map_indices(p0s.size(), [&](std::size_t i) { return inner_max_face(params(i), kFig22P1); },
                  policy);
  const auto labels = map_indices(
      p0s.size(),
      [&](std::size_t i) { return static_cast<double>(classify(params(i)).index[0].label); },
      policy);
  const double outer2 = half_log2(1.0 + kFig22P1);

  FigureOutput out;
  out.table.header = {"p0", "outer_bound_1", "outer_bound_2", "outer_r1", "inner_r1", "label_r1"};
  PlotSeries s1{"upper bound 1", {}, false}, s2{"upper bound 2", {}, false},
      s3{"lower bound", {}, false};
  for (std::size_t i = 0; i < p0s.size(); ++i) {
    const char label = label_char(static_cast<MacLabel>(static_cast<int>(labels[i])));
    out.table.rows.push_back({num(p0s[i]), num(outer1[i]), num(outer2),
                              num(std::min(outer1[i], outer2)), num(inner[i]),
                              std::string(1, label)});
    s1.points.push_back({p0s[i], outer1[i]});
    s2.points.push_back({p0s[i], outer2});
    s3.points.push_back({p0s[i], inner[i]});
  }
  out.plot = {"Helper MAC: bounds on R1 (P1 = 5, Q = 12)", "P0", "R1 (bits)", {s1, s2, s3}};
  return out;
}

FigureOutput fig2_3(ExecPolicy policy) {
  const auto qs = linspace({0.5, 20.0}, 40);
  const auto p0s = linspace({0.0, 20.0}, 41);
  const std::size_t n = qs.size() * p0s.size();
  const auto labels = map_indices(
      n,
      [&](std::size_t k) {
        const MacHelperParams p{p0s[k % p0s.size()], kFig22P1, 0.0, qs[k / p0s.size()]};
        return static_cast<double>(classify(p).index[0].label);
      },
      policy);
  FigureOutput out;
  out.table.header = {"q", "p0", "label_r1"};
  PlotSeries a{"A: f meets outer bound", {}, true}, c{"C: no-state capacity", {}, true};
  for (std::size_t k = 0; k < n; ++k) {
    const double q = qs[k / p0s.size()], p0 = p0s[k % p0s.size()];
    const auto label = static_cast<MacLabel>(static_cast<int>(labels[k]));
    out.table.rows.push_back({num(q), num(p0), std::string(1, label_char(label))});
    if (label == MacLabel::A) a.points.push_back({q, p0});
    if (label == MacLabel::C) c.points.push_back({q, p0});
  }
  out.plot = {"Helper MAC: characterised parameters (P1 = 5)", "Q", "P0", {a, c}};
  return out;
}

FigureOutput fig3_2(ExecPolicy policy) {
  std::vector<double> ds;
  for (int i = 1; i <= 10; ++i) ds.push_back(0.1 * i);
  const auto amin = map_indices(ds.size(), [&](std::size_t i) { return fig3_2_min_a(ds[i]); },
                                policy);
  FigureOutput out;
  out.table.header = {"d", "min_a"};
  PlotSeries s{"threshold on a", {}, false};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.table.rows.push_back({num(ds[i]), num(amin[i])});
    s.points.push_back({amin[i], ds[i]});
  }
  out.plot = {"Z-IC very strong: smallest a reaching capacity (P1 = P2 = 2, Q1 = Q2 = 1)", "a",
              "d", {s}};
  return out;
}

FigureOutput fig3_3(ExecPolicy policy) {
  const double dmax = std::sqrt(kFig32Q / kFig33Q2);
  std::vector<double> ds;
  for (int i = 1; i <= 16; ++i) ds.push_back(dmax * i / 16.0);
  const double a_lo = std::sqrt(1.0 + kFig32P) * (1.0 + 1e-9);
  std::vector<std::vector<Interval>> found(ds.size());
  map_indices(
      ds.size(),
      [&](std::size_t i) {
        const double rho = std::min(1.0, ds[i] / dmax);
        auto margin = [&](double a) {
          return zic_vs_condition({a, kFig32P, kFig32P, kFig32Q, kFig33Q2, rho}).report.margin;
        };
        found[i] = satisfied_intervals(margin, {a_lo, kFig33AMax}, 1025, 1e-6);
        return 0.0;
      },
      policy);
  FigureOutput out;
  out.table.header = {"d", "a_lo", "a_hi"};
  PlotSeries lo{"lower threshold", {}, false}, hi{"upper threshold", {}, false};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (found[i].empty()) out.table.rows.push_back({num(ds[i]), "nan", "nan"});
    for (const auto& iv : found[i]) {
      out.table.rows.push_back({num(ds[i]), num(iv.lo), num(iv.hi)});
      lo.points.push_back({iv.lo, ds[i]});
      hi.points.push_back({iv.hi, ds[i]});
    }
  }
  out.plot = {"Z-IC very strong with Q2 = 1.6: range of a reaching capacity", "a", "d", {lo, hi}};
  return out;
}

ZicParams fig35_params(double rho) {
  return {kFig35A, kFig35P, kFig35P, kFig35Q1, kFig35Q2, rho};
}

FigureOutput fig3_5(ExecPolicy policy) {
  const auto rhos = linspace({0.0, 1.0}, kFig35CPoints);
  const double cscale = std::sqrt(kFig35Q2 / kFig35Q1);
  const auto p1dd = linspace({kFig35A * kFig35A - 1.0, kFig35P}, kFig35R1Points);
  const std::size_t n = rhos.size() * p1dd.size();
  const auto pass = map_indices(
      n,
      [&](std::size_t k) {
        const auto r = zic_strong_point(fig35_params(rhos[k / p1dd.size()]), p1dd[k % p1dd.size()]);
        return r.condition.pass ? 1.0 : 0.0;
      },
      policy);
  std::vector<StrongSegment> segs(rhos.size());
  map_indices(
      rhos.size(),
      [&](std::size_t i) {
        segs[i] = zic_strong_segment(fig35_params(rhos[i]));
        return 0.0;
      },
      policy);

  FigureOutput out;
  out.table.header = {"c", "rho", "pass_count", "r1_lo", "r1_hi"};
  PlotSeries pts{"achievable points", {}, true};
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < p1dd.size(); ++j) {
      if (pass[i * p1dd.size() + j] == 0.0) continue;
      ++count;
      const auto r = strong_rates(kFig35A, kFig35P, kFig35P, make_split(kFig35P, p1dd[j]));
      pts.points.push_back({r.r1, rhos[i] * cscale});
    }
    const auto& s = segs[i];
    out.table.rows.push_back({num(rhos[i] * cscale), num(rhos[i]), std::to_string(count),
                              s.empty ? "nan" : num(s.from.r1), s.empty ? "nan" : num(s.to.r1)});
  }
  out.plot = {"Strong Z-IC: sum-capacity points reached (P1 = P2 = 1, Q1 = 2, Q2 = 1, a = 1.2)",
              "R1 (bits)", "c", {pts}};
  return out;
}

FigureOutput fig4_2(ExecPolicy policy) {
  const auto bs = linspace({0.0, kFig42BMax}, 431);
  const std::vector<double> ds{0.99, 0.5, 0.1};
  const double target = half_log2(1.0 + kFig42P);
  std::vector<std::vector<double>> first(ds.size()), second(ds.size());
  for (std::size_t k = 0; k < ds.size(); ++k) {
    auto at = [&](std::size_t i) {
      return IcParams{kFig42A, bs[i], kFig42P, kFig42P, kFig42Q, kFig42Q, ds[k]};
    };
    first[k] = map_indices(
        bs.size(), [&](std::size_t i) { return ic_vs_first_margin(at(i)) + target; }, policy);
    second[k] = map_indices(
        bs.size(), [&](std::size_t i) { return ic_vs_second_margin(at(i)) + target; }, policy);
  }
  FigureOutput out;
  out.table.header = {"b"};
  for (double d : ds) out.table.header.push_back("cond1_d" + d_label(d));
  for (double d : ds) out.table.header.push_back("cond2_d" + d_label(d));
  out.table.header.push_back("target");
  std::vector<PlotSeries> series;
  for (std::size_t k = 0; k < ds.size(); ++k)
    series.push_back({"receiver-2 term, d = " + d_label(ds[k]), {}, false});
  for (std::size_t k = 0; k < ds.size(); ++k)
    series.push_back({"receiver-1 term, d = " + d_label(ds[k]), {}, false});
  series.push_back({"1/2 log(1 + P)", {}, false});
  for (std::size_t i = 0; i < bs.size(); ++i) {
    std::vector<std::string> row{num(bs[i])};
    for (std::size_t k = 0; k < ds.size(); ++k) {
      row.push_back(num(first[k][i]));
      series[k].points.push_back({bs[i], first[k][i]});
    }
    for (std::size_t k = 0; k < ds.size(); ++k) {
      row.push_back(num(second[k][i]));
      series[ds.size() + k].points.push_back({bs[i], second[k][i]});
    }
    row.push_back(num(target));
    series.back().points.push_back({bs[i], target});
    out.table.rows.push_back(std::move(row));
  }
  // Keep the plot readable near the singular design.
  for (auto& s : series)
    for (auto& p : s.points)
      if (std::abs(p.r2) > 5.0) p.r2 = NAN;
  out.plot = {"IC very strong conditions versus b (Q = 0.9, P = 1, a = 1.6)", "b", "bits", series};
  return out;
}

FigureOutput fig4_3(ExecPolicy policy) {
  const std::vector<double> ds{0.99, 0.5, 0.1};
  const auto grid = linspace({1.0, 5.0}, 41);
  const std::size_t per = grid.size() * grid.size();
  const auto pass = map_indices(
      ds.size() * per,
      [&](std::size_t k) {
        const double d = ds[k / per];
        const std::size_t r = k % per;
        const IcParams p{grid[r / grid.size()], grid[r % grid.size()], kFig42P, kFig42P,
                         kFig42Q, kFig42Q, d};
        if (!ic_vs_gate(p)) return 0.0;
        try {
          const auto c = ic_vs_conditions(p);
          return (c.first.pass && c.second.pass) ? 1.0 : 0.0;
        } catch (const SingularCoefficientError&) {
          return 0.0;
        }
      },
      policy);
  FigureOutput out;
  out.table.header = {"d", "a", "b", "pass"};
  std::vector<PlotSeries> series;
  for (double d : ds) series.push_back({"d = " + d_label(d), {}, true});
  for (std::size_t k = 0; k < pass.size(); ++k) {
    const std::size_t di = k / per, r = k % per;
    const double a = grid[r / grid.size()], b = grid[r % grid.size()];
    out.table.rows.push_back({num(ds[di]), num(a), num(b), pass[k] != 0.0 ? "1" : "0"});
    if (pass[k] != 0.0) series[di].points.push_back({a, b});
  }
  out.plot = {"IC very strong: (a, b) reaching capacity (Q = 0.9, P = 1)", "a", "b", series};
  return out;
}

FigureOutput fig4_5(ExecPolicy policy) {
  const auto rhos = linspace({0.0, 1.0}, kFig35CPoints);
  const double cscale = std::sqrt(kFig35Q2 / kFig35Q1);
  std::vector<StrongSegment> z(rhos.size()), ic(rhos.size());
  map_indices(
      rhos.size(),
      [&](std::size_t i) {
        z[i] = zic_strong_segment(fig35_params(rhos[i]));
        ic[i] = ic_strong_segment({kFig35A, kFig45B, kFig35P, kFig35P, kFig35Q1, kFig35Q2,
                                   rhos[i]});
        return 0.0;
      },
      policy);
  FigureOutput out;
  out.table.header = {"c", "rho", "zic_r1_lo", "zic_r1_hi", "ic_r1_lo", "ic_r1_hi"};
  PlotSeries zs{"Z-IC segment start", {}, false}, is{"IC segment start", {}, false};
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const double c = rhos[i] * cscale;
    out.table.rows.push_back({num(c), num(rhos[i]), z[i].empty ? "nan" : num(z[i].from.r1),
                              z[i].empty ? "nan" : num(z[i].to.r1),
                              ic[i].empty ? "nan" : num(ic[i].from.r1),
                              ic[i].empty ? "nan" : num(ic[i].to.r1)});
    if (!z[i].empty) zs.points.push_back({z[i].from.r1, c});
    if (!ic[i].empty) is.points.push_back({ic[i].from.r1, c});
  }
  out.plot = {"Strong regime: characterised sum-capacity segments (b = 1.2 for the IC)",
              "R1 (bits)", "c", {zs, is}};
  return out;
}

}  // namespace

double fig3_2_min_a(double d, double resolution) {
  const double lo = std::sqrt(1.0 + kFig32P) * (1.0 + 1e-9);
  auto margin = [&](double a) {
    return zic_vs_condition({a, kFig32P, kFig32P, kFig32Q, kFig32Q, d}).report.margin;
  };
  const auto iv = satisfied_intervals(margin, {lo, kFig32AMax}, 1025, resolution);
  return iv.empty() ? NAN : iv.front().lo;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2_2", "fig2_3", "fig3_2", "fig3_3",
                                              "fig3_5", "fig4_2", "fig4_3", "fig4_5"};
  return names;
}

bool is_figure(const std::string& name) {
  for (const auto& n : figure_names())
    if (n == name) return true;
  return false;
}

FigureOutput make_figure(const std::string& name, ExecPolicy policy) {
  if (name == "fig2_2") return fig2_2(policy);
  if (name == "fig2_3") return fig2_3(policy);
  if (name == "fig3_2") return fig3_2(policy);
  if (name == "fig3_3") return fig3_3(policy);
  if (name == "fig3_5") return fig3_5(policy);
  if (name == "fig4_2") return fig4_2(policy);
  if (name == "fig4_3") return fig4_3(policy);
  if (name == "fig4_5") return fig4_5(policy);
  throw std::invalid_argument("unknown figure preset: " + name);
}

std::vector<std::filesystem::path> write_figure(const std::string& name,
                                                const std::filesystem::path& dir,
                                                ExecPolicy policy) {
  const auto fig = make_figure(name, policy);
  std::filesystem::create_directories(dir);
  const auto csv = dir / (name + ".csv");
  const auto svg = dir / (name + ".svg");
  export_table_csv(fig.table, csv);
  export_svg(fig.plot, svg);
  return {csv, svg};
}

}  // namespace dirtyregion
