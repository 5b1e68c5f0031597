#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nonbloch/dynamics.hpp"
#include "nonbloch/gbz.hpp"
#include "nonbloch/greens.hpp"
#include "nonbloch/hierarchy.hpp"
#include "nonbloch/lattice.hpp"
#include "nonbloch/spectra.hpp"

namespace nonbloch::io {

/// Formats doubles with max_digits10 so reruns are bit-identical.
std::string num(double v);

struct Csv {
  explicit Csv(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  void write(const std::filesystem::path& path) const;

 private:
  std::string body_;
  std::size_t columns_;
};

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumCloud& cloud);
void write_gbz_csv(const std::filesystem::path& path, const GbzCloud& cloud);
void write_matrix_triplets_csv(const std::filesystem::path& path, const OperatorMatrix& h);
void write_profile_csv(const std::filesystem::path& path, const GreensProfile& profile);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);
void write_verdict_csv(const std::filesystem::path& path,
                       const std::vector<HierarchyVerdict>& verdicts);
void write_potential_json(const std::filesystem::path& path, const PotentialReport& report);

/// Minimal self-contained SVG emitters (scatter + heatmap), enough to eyeball
/// spectra and omega-plane maps without a plotting dependency.
struct ScatterSeries {
  std::vector<cplx> points;
  std::string color = "#1f6fb4";
};

void write_scatter_svg(const std::filesystem::path& path,
                       const std::vector<ScatterSeries>& series, const std::string& title);

/// values laid out row-major over nx columns, ny rows (x = Re, y = Im axes).
void write_heatmap_svg(const std::filesystem::path& path, const std::vector<double>& values,
                       int nx, int ny, double x0, double x1, double y0, double y1,
                       const std::string& title);

}  // namespace nonbloch::io
