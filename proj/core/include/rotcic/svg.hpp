#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace rotcic {

struct ScatterPanel {
  std::string title;
  Eigen::MatrixXd points;  // n x 2
  std::string color = "#1f77b4";
};

/// Side-by-side scatter panels sharing one pair of axes ranges.
std::string scatter_svg(const std::vector<ScatterPanel>& panels, const std::string& x_label = "dim 0",
                        const std::string& y_label = "dim 1");
void write_scatter_svg(const std::filesystem::path& path, const std::vector<ScatterPanel>& panels,
                       const std::string& x_label = "dim 0", const std::string& y_label = "dim 1");

}  // namespace rotcic
