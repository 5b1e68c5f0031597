#include "nonbloch/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nonbloch/errors.hpp"

namespace nonbloch::io {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("io: cannot open " + path.string() + " for writing");
  out << content;
}

}  // namespace

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(std::numeric_limits<double>::max_digits10);
  ss << v;
  return ss.str();
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) body_ += (i ? "," : "") + header[i];
  body_ += "\n";
}

void Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) body_ += (i ? "," : "") + cells[i];
  body_ += "\n";
}

void Csv::write(const std::filesystem::path& path) const { write_file(path, body_); }

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumCloud& cloud) {
  Csv csv({"re", "im", "source_tag"});
  for (const cplx& e : cloud.values) csv.row({num(e.real()), num(e.imag()), cloud.source_tag});
  csv.write(path);
}

void write_gbz_csv(const std::filesystem::path& path, const GbzCloud& cloud) {
  Csv csv({"re_beta", "im_beta", "re_e", "im_e", "branch_index"});
  for (const GbzPoint& p : cloud.points)
    csv.row({num(p.beta.real()), num(p.beta.imag()), num(p.energy.real()), num(p.energy.imag()),
             std::to_string(p.branch)});
  csv.write(path);
}

void write_matrix_triplets_csv(const std::filesystem::path& path, const OperatorMatrix& h) {
  Csv csv({"row", "col", "re", "im"});
  for (int i = 0; i < h.dim(); ++i)
    for (int j = 0; j < h.dim(); ++j) {
      const cplx v = h.entries(i, j);
      if (v != cplx(0.0, 0.0))
        csv.row({std::to_string(i), std::to_string(j), num(v.real()), num(v.imag())});
    }
  csv.write(path);
}

void write_profile_csv(const std::filesystem::path& path, const GreensProfile& profile) {
  Csv csv({"site", "ln_abs_g"});
  for (const auto& [site, v] : profile.log_abs) csv.row({std::to_string(site), num(v)});
  csv.write(path);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  Csv csv({"t", "re_amp", "im_amp", "norm"});
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    csv.row({num(tr.times[i]), num(tr.probe_amp[i].real()), num(tr.probe_amp[i].imag()),
             num(tr.norm_trace[i])});
  csv.write(path);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  Csv csv({"delta", "max_imag"});
  for (std::size_t i = 0; i < sweep.deltas.size(); ++i)
    csv.row({num(sweep.deltas[i]), num(sweep.max_imag[i])});
  csv.write(path);
}

void write_verdict_csv(const std::filesystem::path& path,
                       const std::vector<HierarchyVerdict>& verdicts) {
  Csv csv({"re_omega", "im_omega", "zone", "w_x", "w_y", "mu_star_x", "mu_star_y",
           "cert_distance"});
  for (const HierarchyVerdict& v : verdicts) {
    auto w_at = [&](std::size_t i) {
      if (!v.windings_mu0 || v.windings_mu0->size() <= i) return std::string();
      return std::to_string((*v.windings_mu0)[i]);
    };
    auto mu_at = [&](std::size_t i) {
      if (!v.mu_star || v.mu_star->size() <= i) return std::string();
      return num((*v.mu_star)[i]);
    };
    csv.row({num(v.omega.real()), num(v.omega.imag()), to_string(v.zone), w_at(0), w_at(1),
             mu_at(0), mu_at(1), num(v.cert_distance)});
  }
  csv.write(path);
}

void write_potential_json(const std::filesystem::path& path, const PotentialReport& report) {
  std::ostringstream ss;
  ss.precision(std::numeric_limits<double>::max_digits10);
  ss << "{\n"
     << "  \"omega\": [" << report.omega.real() << ", " << report.omega.imag() << "],\n"
     << "  \"phi\": " << report.phi << ",\n"
     << "  \"series_terms\": [" << report.series_terms[0] << ", " << report.series_terms[1]
     << "],\n"
     << "  \"converged\": " << (report.converged ? "true" : "false") << "\n}\n";
  write_file(path, ss.str());
}

namespace {

struct Box {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

Box bounds(const std::vector<ScatterSeries>& series) {
  Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series)
    for (const cplx& p : s.points) {
      b.x0 = std::min(b.x0, p.real());
      b.x1 = std::max(b.x1, p.real());
      b.y0 = std::min(b.y0, p.imag());
      b.y1 = std::max(b.y1, p.imag());
    }
  if (!(b.x0 < b.x1)) {
    b.x0 -= 0.5;
    b.x1 += 0.5;
  }
  if (!(b.y0 < b.y1)) {
    b.y0 -= 0.5;
    b.y1 += 0.5;
  }
  const double px = 0.05 * (b.x1 - b.x0), py = 0.05 * (b.y1 - b.y0);
  return Box{b.x0 - px, b.x1 + px, b.y0 - py, b.y1 + py};
}

std::string svg_header(int w, int h, const std::string& title) {
  std::ostringstream ss;
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"10\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << title
     << "</text>\n";
  return ss.str();
}

}  // namespace

void write_scatter_svg(const std::filesystem::path& path,
                       const std::vector<ScatterSeries>& series, const std::string& title) {
  constexpr int kW = 640, kH = 480, kPad = 40;
  const Box b = bounds(series);
  std::ostringstream ss;
  ss << svg_header(kW, kH, title);
  auto sx = [&](double x) { return kPad + (x - b.x0) / (b.x1 - b.x0) * (kW - 2 * kPad); };
  auto sy = [&](double y) { return kH - kPad - (y - b.y0) / (b.y1 - b.y0) * (kH - 2 * kPad); };
  ss << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad
     << "\" height=\"" << kH - 2 * kPad << "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (const auto& s : series) {
    for (const cplx& p : s.points)
      ss << "<circle cx=\"" << sx(p.real()) << "\" cy=\"" << sy(p.imag())
         << "\" r=\"2\" fill=\"" << s.color << "\"/>\n";
  }
  ss << "</svg>\n";
  write_file(path, ss.str());
}

void write_heatmap_svg(const std::filesystem::path& path, const std::vector<double>& values,
                       int nx, int ny, double x0, double x1, double y0, double y1,
                       const std::string& title) {
  if (static_cast<int>(values.size()) != nx * ny) throw Error("heatmap: size mismatch");
  constexpr int kW = 640, kH = 480, kPad = 40;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::ostringstream ss;
  ss << svg_header(kW, kH, title + "  [" + num(lo) + ", " + num(hi) + "]");
  const double cw = static_cast<double>(kW - 2 * kPad) / nx;
  const double ch = static_cast<double>(kH - 2 * kPad) / ny;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = values[static_cast<std::size_t>(j) * nx + i];
      double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      // blue -> white -> red
      const int r = static_cast<int>(255 * std::min(1.0, 2 * t));
      const int bl = static_cast<int>(255 * std::min(1.0, 2 * (1 - t)));
      const int g = static_cast<int>(255 * (1.0 - std::abs(2 * t - 1)));
      ss << "<rect x=\"" << kPad + i * cw << "\" y=\"" << kH - kPad - (j + 1) * ch
         << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb(" << r
         << "," << g << "," << bl << ")\"/>\n";
    }
  ss << "<text x=\"10\" y=\"" << kH - 8 << "\" font-family=\"sans-serif\" font-size=\"11\">Re ["
     << num(x0) << ", " << num(x1) << "]  Im [" << num(y0) << ", " << num(y1) << "]</text>\n";
  ss << "</svg>\n";
  write_file(path, ss.str());
}

}  // namespace nonbloch::io
