// svg.hpp — the accuracy-complexity plot and its local-minima summary.
//
// x: polyline FVE in [0,1]; y: geometrical complexity (linear or log).
// Rows are drawn in step order even where FVE is non-monotone. A vertical
// line marks every step whose barcode differs from the previous step's,
// labeled with the star-count part only (node counts stay off the plot).
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epg/dataset.hpp"
#include "epg/graph.hpp"
#include "epg/linalg.hpp"
#include "epg/trace_io.hpp"

namespace epg {

struct PlotSpec {
  bool log_scale = false;
  std::vector<long> markers;  // highlighted steps (chosen scales)
  // Optional second panel: data + graph projected on the first two
  // principal components.
  const DataSet* projection_data = nullptr;
  const ElasticGraph* projection_graph = nullptr;
};

// Steps where GC has a local minimum along the step sequence. Plateaus
// collapse to their first step; a run counts when strictly greater values
// flank it on both sides.
inline std::vector<std::size_t> gc_local_minima(const std::vector<TraceRow>& rows) {
  std::vector<std::size_t> out;
  const std::size_t n = rows.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && rows[j + 1].gc == rows[i].gc) ++j;
    if (j + 1 < n && rows[i - 1].gc > rows[i].gc && rows[j + 1].gc > rows[i].gc)
      out.push_back(i);
    i = j + 1;
  }
  return out;
}

inline nlohmann::json local_minima_json(const std::vector<TraceRow>& rows) {
  nlohmann::json j;
  j["local_minima"] = nlohmann::json::array();
  for (std::size_t i : gc_local_minima(rows)) {
    nlohmann::json entry;
    entry["step"] = rows[i].step;
    entry["n_nodes"] = rows[i].n_nodes;
    entry["barcode"] = rows[i].barcode;
    entry["fve_polyline"] = rows[i].fve_polyline;
    entry["gc"] = rows[i].gc;
    j["local_minima"].push_back(std::move(entry));
  }
  return j;
}

namespace detail {
inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}
}  // namespace detail

inline std::string render_accuracy_complexity_svg(const std::vector<TraceRow>& rows,
                                                  const PlotSpec& spec = {}) {
  if (rows.empty()) throw data_error("empty trace");
  const double W = 640, H = 480;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const bool second_panel = spec.projection_data && spec.projection_graph;
  const double total_w = second_panel ? 2 * W : W;

  double x_lo = 0.0, x_hi = 1.0;
  double gc_max = 0.0, gc_min_pos = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    gc_max = std::max(gc_max, r.gc);
    if (r.gc > 0.0) gc_min_pos = std::min(gc_min_pos, r.gc);
  }
  if (gc_max <= 0.0) gc_max = 1.0;
  if (!std::isfinite(gc_min_pos)) gc_min_pos = gc_max * 1e-6;

  const double y_top = spec.log_scale ? std::log10(gc_max * 1.05)
                                      : gc_max * 1.05;
  const double y_bot = spec.log_scale ? std::log10(gc_min_pos * 0.5) : 0.0;
  auto xmap = [&](double fve_val) {
    double t = std::clamp((fve_val - x_lo) / (x_hi - x_lo), 0.0, 1.0);
    return ml + t * (W - ml - mr);
  };
  auto ymap = [&](double gc_val) {
    double v = spec.log_scale ? std::log10(std::max(gc_val, gc_min_pos * 0.5)) : gc_val;
    double t = (v - y_bot) / std::max(y_top - y_bot, 1e-300);
    return H - mb - t * (H - mt - mb);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << total_w << " " << H << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << total_w << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / 5.0;
    svg << "<line x1=\"" << xmap(fx) << "\" y1=\"" << H - mb << "\" x2=\"" << xmap(fx)
        << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << xmap(fx) << "\" y=\"" << H - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::fmt_tick(fx) << "</text>\n";
    const double gy = y_bot + (y_top - y_bot) * t / 5.0;
    const double gv = spec.log_scale ? std::pow(10.0, gy) : gy;
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << H - mb - (H - mt - mb) * t / 5.0 << "\" x2=\""
        << ml << "\" y2=\"" << H - mb - (H - mt - mb) * t / 5.0 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << H - mb - (H - mt - mb) * t / 5.0 + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmt_tick(gv) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">FVE</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + H - mb) / 2 << ")\">geometrical complexity</text>\n";

  // Vertical lines where the structural complexity changes. The star-count
  // part of the barcode is what matters (the node count moves every step),
  // and it is also the label, matching the figures.
  auto star_part = [](const std::string& bc) { return bc.substr(0, bc.find("||")); };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (star_part(rows[i].barcode) == star_part(rows[i - 1].barcode)) continue;
    const double x = xmap(rows[i].fve_polyline);
    svg << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << H - mb
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << mt - 6
        << "\" font-size=\"10\" text-anchor=\"middle\">" << detail::xml_escape(star_part(rows[i].barcode))
        << "</text>\n";
  }

  // the trajectory, in step order
  svg << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : rows) svg << xmap(r.fve_polyline) << ',' << ymap(r.gc) << ' ';
  svg << "\"/>\n";
  for (const auto& r : rows)
    svg << "<circle cx=\"" << xmap(r.fve_polyline) << "\" cy=\"" << ymap(r.gc)
        << "\" r=\"2.2\" fill=\"#1f4e9c\"/>\n";
  for (long mstep : spec.markers)
    for (const auto& r : rows)
      if (r.step == mstep)
        svg << "<circle cx=\"" << xmap(r.fve_polyline) << "\" cy=\"" << ymap(r.gc)
            << "\" r=\"6\" fill=\"none\" stroke=\"#c03020\" stroke-width=\"2\"/>\n";

  if (second_panel) {
    const DataSet& data = *spec.projection_data;
    const ElasticGraph& g = *spec.projection_graph;
    auto mean = data_mean(data);
    auto pc1 = principal_direction(data.points, std::size_t(data.size()), std::size_t(data.dim), mean);
    auto pc2 = data.dim > 1
                   ? principal_direction(data.points, std::size_t(data.size()), std::size_t(data.dim),
                                         mean, {pc1})
                   : std::vector<double>(1, 0.0);
    auto project = [&](std::span<const double> p) {
      double u = 0.0, v = 0.0;
      for (int j = 0; j < data.dim; ++j) {
        u += (p[std::size_t(j)] - mean[std::size_t(j)]) * pc1[std::size_t(j)];
        v += (p[std::size_t(j)] - mean[std::size_t(j)]) * pc2[std::size_t(j)];
      }
      return std::pair<double, double>(u, v);
    };
    double lo_u = 1e300, hi_u = -1e300, lo_v = 1e300, hi_v = -1e300;
    auto widen = [&](std::pair<double, double> uv) {
      lo_u = std::min(lo_u, uv.first);
      hi_u = std::max(hi_u, uv.first);
      lo_v = std::min(lo_v, uv.second);
      hi_v = std::max(hi_v, uv.second);
    };
    for (long i = 0; i < data.size(); ++i) widen(project(data.point(i)));
    for (int i = 0; i < g.node_count(); ++i) widen(project(g.node(i)));
    const double span_u = std::max(hi_u - lo_u, 1e-12), span_v = std::max(hi_v - lo_v, 1e-12);
    auto pxmap = [&](double u) { return W + ml + (u - lo_u) / span_u * (W - ml - mr); };
    auto pymap = [&](double v) { return H - mb - (v - lo_v) / span_v * (H - mt - mb); };
    svg << "<text x=\"" << W + (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">projection on first two principal "
           "components</text>\n";
    for (long i = 0; i < data.size(); ++i) {
      auto uv = project(data.point(i));
      svg << "<circle cx=\"" << pxmap(uv.first) << "\" cy=\"" << pymap(uv.second)
          << "\" r=\"1.5\" fill=\"#b0b0b0\"/>\n";
    }
    for (const auto& e : g.edges) {
      auto a = project(g.node(e.a)), b = project(g.node(e.b));
      svg << "<line x1=\"" << pxmap(a.first) << "\" y1=\"" << pymap(a.second) << "\" x2=\""
          << pxmap(b.first) << "\" y2=\"" << pymap(b.second)
          << "\" stroke=\"#c03020\" stroke-width=\"1.5\"/>\n";
    }
    for (int i = 0; i < g.node_count(); ++i) {
      auto uv = project(g.node(i));
      svg << "<circle cx=\"" << pxmap(uv.first) << "\" cy=\"" << pymap(uv.second)
          << "\" r=\"3\" fill=\"#c03020\"/>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace epg
