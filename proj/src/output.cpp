#include "polar/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "polar/errors.hpp"
#include "util.hpp"

namespace polar {

namespace {

using Point = std::pair<double, double>;

// Keeps the part of the polygon where a*x + b*y <= c.
std::vector<Point> clip(const std::vector<Point>& poly, double a, double b, double c) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double fp = a * p.first + b * p.second - c;
    const double fq = a * q.first + b * q.second - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      const double s = fp / (fp - fq);
      out.emplace_back(p.first + s * (q.first - p.first), p.second + s * (q.second - p.second));
    }
  }
  return out;
}

TaylorModel axis_tm(const StepFlowpipe& fp, double control_step, int axis) {
  const TMVector& tm = fp.pipe.tm;
  if (axis >= 0) return tm[static_cast<std::size_t>(axis)];
  const Domain& dom = tm.domain();
  const TaylorModel t = TaylorModel::variable(dom.size() - 1, dom, tm.order());
  return add_constant(t, fp.start_time(control_step));
}

nlohmann::ordered_json interval_json(const Interval& i) { return nlohmann::ordered_json::array({i.lo(), i.hi()}); }

nlohmann::ordered_json box_json(const IntervalVector& box) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& i : box) a.push_back(interval_json(i));
  return a;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::vector<Projection> default_projections(std::size_t num_states) {
  std::vector<Projection> p;
  for (std::size_t i = 0; i < num_states; ++i) p.push_back(Projection{kTimeAxis, static_cast<int>(i)});
  return p;
}

std::string axis_name(int axis, const std::vector<std::string>& names) {
  return axis < 0 ? "t" : names.at(static_cast<std::size_t>(axis));
}

std::vector<Projection> parse_projections(std::string_view spec, const std::vector<std::string>& names) {
  auto axis = [&](std::string_view s) {
    s = detail::trim(s);
    if (s == "t") return kTimeAxis;
    const auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) throw std::invalid_argument("unknown projection variable '" + std::string(s) + "'");
    return static_cast<int>(it - names.begin());
  };
  std::vector<Projection> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const std::string_view item = spec.substr(start, comma - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("projection '" + std::string(item) + "' must look like a:b");
    out.push_back(Projection{axis(item.substr(0, colon)), axis(item.substr(colon + 1))});
    start = comma + 1;
  }
  return out;
}

std::vector<Point> Octagon::vertices() const {
  std::vector<Point> poly{{x.lo(), y.lo()}, {x.hi(), y.lo()}, {x.hi(), y.hi()}, {x.lo(), y.hi()}};
  poly = clip(poly, 1, 1, sum.hi());
  poly = clip(poly, -1, -1, -sum.lo());
  poly = clip(poly, 1, -1, diff.hi());
  poly = clip(poly, -1, 1, -diff.lo());
  return poly;
}

Octagon octagon(const StepFlowpipe& fp, double control_step, const Projection& proj) {
  const TaylorModel a = axis_tm(fp, control_step, proj.x);
  const TaylorModel b = axis_tm(fp, control_step, proj.y);
  return Octagon{a.range(), b.range(), (a + b).range(), (a - b).range()};
}

void write_csv(std::ostream& out, const NNCSModel& model, const ReachResult& result,
               const std::vector<Projection>& projections) {
  const auto& names = model.state_names;
  out << "control_step,flow_step,t_start,t_end,x_var,y_var,x_lo,x_hi,y_lo,y_hi,sum_lo,sum_hi,diff_lo,diff_hi\n";
  for (const auto& fp : result.flowpipes) {
    const double t0 = fp.start_time(result.control_step);
    for (const auto& proj : projections) {
      const Octagon o = octagon(fp, result.control_step, proj);
      out << fp.control_step << ',' << fp.pipe.step_index << ',' << detail::format_double(t0) << ','
          << detail::format_double(t0 + fp.pipe.delta) << ',' << axis_name(proj.x, names) << ','
          << axis_name(proj.y, names);
      for (const Interval& i : {o.x, o.y, o.sum, o.diff})
        out << ',' << detail::format_double(i.lo()) << ',' << detail::format_double(i.hi());
      out << '\n';
    }
  }
}

void write_json(std::ostream& out, const NNCSModel& model, const ReachResult& result,
                const std::vector<Projection>& projections, const SimulationSet* sims) {
  using J = nlohmann::ordered_json;
  J doc;
  doc["states"] = model.state_names;
  doc["controls"] = model.control_names;
  doc["control_step"] = result.control_step;
  doc["flowsteps"] = result.flowsteps;
  doc["init"] = box_json(result.init);
  doc["verdict"] = to_string(result.verdict);

  J steps = J::array();
  for (std::size_t i = 0; i < result.step_ranges.size(); ++i) {
    J s;
    s["control_step"] = i;
    s["range"] = box_json(result.step_ranges[i]);
    s["control_remainder"] = box_json(result.stats[i].control_remainder);
    s["state_remainder"] = box_json(result.stats[i].state_remainder);
    steps.push_back(std::move(s));
  }
  doc["steps"] = std::move(steps);

  J pipes = J::array();
  for (const auto& fp : result.flowpipes) {
    J p;
    p["control_step"] = fp.control_step;
    p["flow_step"] = fp.pipe.step_index;
    p["t_start"] = fp.start_time(result.control_step);
    p["t_end"] = fp.start_time(result.control_step) + fp.pipe.delta;
    p["box"] = box_json(flowpipe_box(fp.pipe));
    J widths = J::array();
    for (const auto& r : fp.pipe.tm.remainders()) widths.push_back(r.width());
    p["remainder_width"] = std::move(widths);
    J octs = J::array();
    for (const auto& proj : projections) {
      const Octagon o = octagon(fp, result.control_step, proj);
      octs.push_back(J{{"x", axis_name(proj.x, model.state_names)},
                       {"y", axis_name(proj.y, model.state_names)},
                       {"x_range", interval_json(o.x)},
                       {"y_range", interval_json(o.y)},
                       {"sum_range", interval_json(o.sum)},
                       {"diff_range", interval_json(o.diff)}});
    }
    p["octagons"] = std::move(octs);
    pipes.push_back(std::move(p));
  }
  doc["flowpipes"] = std::move(pipes);
  if (sims) doc["simulation"] = J{{"trajectories", sims->trajectories.size()}, {"violations", sims->violations}};
  out << doc.dump(2) << '\n';
}

void write_svg(std::ostream& out, const NNCSModel& model, const ReachResult& result, const Projection& proj,
               const SimulationSet* sims) {
  constexpr double W = 640, H = 480, M = 50;
  std::vector<std::vector<Point>> polys;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto extend = [&](const Point& p) {
    xmin = std::min(xmin, p.first);
    xmax = std::max(xmax, p.first);
    ymin = std::min(ymin, p.second);
    ymax = std::max(ymax, p.second);
  };
  for (const auto& fp : result.flowpipes) {
    polys.push_back(octagon(fp, result.control_step, proj).vertices());
    for (const auto& p : polys.back()) extend(p);
  }
  auto coord = [&](const Trajectory& tr, std::size_t k, int axis) {
    return axis < 0 ? tr.times[k] : tr.states[k][static_cast<std::size_t>(axis)];
  };
  if (sims)
    for (const auto& tr : sims->trajectories)
      for (std::size_t k = 0; k < tr.times.size(); ++k) extend({coord(tr, k, proj.x), coord(tr, k, proj.y)});
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto sx = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
  auto sy = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };

  const std::string xn = axis_name(proj.x, model.state_names);
  const std::string yn = axis_name(proj.y, model.state_names);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\"" << H - 2 * M
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"14\">" << xn << "  ["
      << fmt(xmin) << ", " << fmt(xmax) << "]</text>\n";
  out << "<text x=\"15\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 15 "
      << H / 2 << ")\">" << yn << "  [" << fmt(ymin) << ", " << fmt(ymax) << "]</text>\n";
  out << "<g fill=\"#6fa8dc\" fill-opacity=\"0.5\" stroke=\"#1c4587\" stroke-width=\"0.5\">\n";
  for (const auto& poly : polys) {
    if (poly.empty()) continue;
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i)
      out << (i ? " " : "") << fmt(sx(poly[i].first)) << ',' << fmt(sy(poly[i].second));
    out << "\"/>\n";
  }
  out << "</g>\n";
  if (sims) {
    out << "<g fill=\"none\" stroke=\"#cc0000\" stroke-width=\"0.8\">\n";
    for (const auto& tr : sims->trajectories) {
      out << "<polyline points=\"";
      for (std::size_t k = 0; k < tr.times.size(); ++k)
        out << (k ? " " : "") << fmt(sx(coord(tr, k, proj.x))) << ',' << fmt(sy(coord(tr, k, proj.y)));
      out << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

void write_trajectories_csv(std::ostream& out, const NNCSModel& model, const SimulationSet& sims) {
  out << "trajectory,t";
  for (const auto& n : model.state_names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < sims.trajectories.size(); ++i) {
    const Trajectory& tr = sims.trajectories[i];
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      out << i << ',' << detail::format_double(tr.times[k]);
      for (double v : tr.states[k]) out << ',' << detail::format_double(v);
      out << '\n';
    }
  }
}

}  // namespace polar
