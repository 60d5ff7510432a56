#pragma once

// SVG 1.1 plot of a matrix's spectrum, its fitted circline and the
// boundary of its numerical range, with the unit circle for reference.
// The viewBox is the bounding square of the plotted data plus a 10% margin;
// the imaginary axis points up.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "offdiag/circline.hpp"
#include "offdiag/classify.hpp"
#include "offdiag/linalg.hpp"

namespace offdiag::svg {

enum class PlotWhat { Spectrum, NumericalRange, Both };

struct PlotOptions {
  PlotWhat what = PlotWhat::Both;
  Index boundary_points = 720;
  Tolerances tols{};
};

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  return s == "-0.000000" ? "0.000000" : s;  // no negative zero
}

struct Box {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool empty = true;

  void add(double x, double y) {
    if (empty) {
      xmin = xmax = x;
      ymin = ymax = y;
      empty = false;
      return;
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  // Plot coordinates: (Re z, -Im z).
  void add(cplx z) { add(z.real(), -z.imag()); }
};

}  // namespace detail

inline std::string render_plot(const CMatrix& t, const PlotOptions& opts = {}) {
  using detail::num;
  require_square(t, "render_plot");
  require_finite(t, "render_plot");
  if (t.rows() == 0) throw Error(ErrorCode::InvalidArgument, "render_plot: empty matrix");

  const bool normal = is_normal(t, opts.tols);
  const std::vector<cplx> spectrum = normal ? eig_normal(t, opts.tols).eigenvalues : sorted_eigenvalues(t);
  const bool show_spectrum = opts.what != PlotWhat::NumericalRange;
  const bool show_range = opts.what != PlotWhat::Spectrum;

  Circline fit;
  if (normal) fit = fit_circline(spectrum, opts.tols.tol_geom);
  std::vector<cplx> boundary;
  if (show_range) boundary = numerical_range_boundary(t, opts.boundary_points);

  detail::Box box;
  for (const cplx& z : spectrum) box.add(z);
  for (const cplx& z : boundary) box.add(z);
  if (show_spectrum && fit.kind == CirclineKind::Circle) {
    box.add(fit.circle.center + fit.circle.radius);
    box.add(fit.circle.center - fit.circle.radius);
    box.add(fit.circle.center + cplx{0.0, fit.circle.radius});
    box.add(fit.circle.center - cplx{0.0, fit.circle.radius});
  }
  double side = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  if (!(side > 0.0)) side = 2.0;
  const double cx = (box.xmin + box.xmax) / 2.0;
  const double cy = (box.ymin + box.ymax) / 2.0;
  const double margin = 0.1 * side;
  const double view = side + 2.0 * margin;
  const double stroke = view / 400.0;
  auto x = [](cplx z) { return num(z.real()); };
  auto y = [](cplx z) { return num(-z.imag()); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + num(cx - view / 2.0) + " " +
         num(cy - view / 2.0) + " " + num(view) + " " + num(view) + "\">\n";
  out += "  <circle id=\"unit-circle\" cx=\"0.000000\" cy=\"0.000000\" r=\"1.000000\" fill=\"none\" stroke=\"#999999\" "
         "stroke-dasharray=\"" + num(4 * stroke) + "\" stroke-width=\"" + num(stroke) + "\"/>\n";

  if (show_range && !boundary.empty()) {
    out += "  <polygon id=\"numerical-range\" fill=\"#cfe0f2\" fill-opacity=\"0.6\" stroke=\"#336699\" stroke-width=\"" +
           num(stroke) + "\" points=\"";
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      if (i) out += ' ';
      out += x(boundary[i]) + "," + y(boundary[i]);
    }
    out += "\"/>\n";
  }

  if (show_spectrum) {
    if (fit.kind == CirclineKind::Circle) {
      const cplx c = fit.circle.center;
      const std::string r = num(fit.circle.radius);
      out += "  <path id=\"circline\" fill=\"none\" stroke=\"#cc6600\" stroke-width=\"" + num(stroke) + "\" d=\"M " +
             x(c + fit.circle.radius) + " " + y(c) + " A " + r + " " + r + " 0 1 0 " + x(c - fit.circle.radius) +
             " " + y(c) + " A " + r + " " + r + " 0 1 0 " + x(c + fit.circle.radius) + " " + y(c) + " Z\"/>\n";
    } else if (fit.kind == CirclineKind::Line) {
      const cplx reach = fit.line.direction * (2.0 * view);
      const cplx mid{cx, -cy};
      // Foot of the perpendicular from the view center onto the line.
      const cplx u = fit.line.direction;
      const cplx foot = fit.line.anchor + u * (std::conj(u) * (mid - fit.line.anchor)).real();
      out += "  <path id=\"circline\" fill=\"none\" stroke=\"#cc6600\" stroke-width=\"" + num(stroke) + "\" d=\"M " +
             x(foot - reach) + " " + y(foot - reach) + " L " + x(foot + reach) + " " + y(foot + reach) + "\"/>\n";
    }
    const std::string dot = num(view / 100.0);
    for (const cplx& z : spectrum) {
      out += "  <circle class=\"eigenvalue\" cx=\"" + x(z) + "\" cy=\"" + y(z) + "\" r=\"" + dot +
             "\" fill=\"#cc0000\"/>\n";
    }
    if (!normal) {
      out += "  <text id=\"note\" x=\"" + num(cx - view / 2.0 + margin / 2.0) + "\" y=\"" +
             num(cy - view / 2.0 + margin / 2.0) + "\" font-size=\"" + num(view / 30.0) +
             "\">non-normal matrix: circline omitted</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace offdiag::svg
