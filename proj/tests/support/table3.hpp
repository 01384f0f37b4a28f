// Printed subsector spillover matrices (two-decimal percentages) used as
// exact fixtures, with their published from/to/net/total values.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace fixtures {

struct SpilloverPanel {
    std::string name;
    Eigen::Matrix<double, 5, 5> matrix;  // rows receive, columns originate
    std::array<double, 5> from_others;
    std::array<double, 5> to_others;
    std::array<double, 5> net;
    double total;
};

inline const std::vector<std::string> kSubsectorLabels = {"Ins.Bro.", "Lif.Hea.", "Mul.Lin.",
                                                          "Pro.Cas.", "Reins."};

inline std::vector<SpilloverPanel> table3_panels() {
    std::vector<SpilloverPanel> panels(4);

    panels[0].name = "LogReturn";
    panels[0].matrix << 79.23, 4.39, 7.24, 4.13, 5.01,
                        2.29, 36.06, 23.74, 19.37, 18.54,
                        3.13, 21.32, 32.73, 20.48, 22.34,
                        2.17, 19.78, 23.38, 36.72, 17.95,
                        2.47, 18.60, 24.89, 17.52, 36.52;
    panels[0].from_others = {20.77, 63.94, 67.27, 63.28, 63.48};
    panels[0].to_others = {10.07, 64.09, 79.24, 61.50, 63.84};
    panels[0].net = {-10.70, 0.15, 11.97, -1.78, 0.36};
    panels[0].total = 278.74;

    panels[1].name = "LogVol";
    panels[1].matrix << 94.51, 1.30, 1.86, 1.50, 0.83,
                        0.59, 42.43, 24.04, 16.81, 16.13,
                        0.59, 20.40, 40.42, 18.37, 20.23,
                        0.53, 16.92, 22.24, 45.27, 15.04,
                        0.36, 16.30, 24.21, 15.20, 43.93;
    panels[1].from_others = {5.49, 57.57, 59.58, 54.73, 56.07};
    panels[1].to_others = {2.07, 54.91, 72.35, 51.88, 52.22};
    panels[1].net = {-3.42, -2.66, 12.77, -2.85, -3.85};
    panels[1].total = 233.44;

    panels[2].name = "CAViaR";
    panels[2].matrix << 87.44, 2.88, 4.51, 2.61, 2.56,
                        0.69, 35.55, 26.04, 18.71, 19.01,
                        0.76, 20.98, 35.77, 20.26, 22.23,
                        0.65, 17.91, 24.97, 38.76, 17.72,
                        0.37, 17.91, 25.70, 17.45, 38.57;
    panels[2].from_others = {12.56, 64.45, 64.23, 61.24, 61.43};
    panels[2].to_others = {2.47, 59.67, 81.22, 59.02, 61.52};
    panels[2].net = {-10.09, -4.78, 16.99, -2.22, 0.09};
    panels[2].total = 263.90;

    panels[3].name = "CARES";
    panels[3].matrix << 84.24, 3.16, 4.28, 5.51, 2.81,
                        1.62, 38.19, 24.38, 17.34, 18.47,
                        1.92, 20.24, 36.17, 20.28, 21.39,
                        2.38, 15.51, 23.55, 41.24, 17.32,
                        1.43, 17.16, 24.82, 18.38, 38.21;
    panels[3].from_others = {15.76, 61.81, 63.83, 58.76, 61.79};
    panels[3].to_others = {7.35, 56.07, 77.03, 61.52, 60.00};
    panels[3].net = {-8.41, -5.74, 13.20, 2.76, -1.79};
    panels[3].total = 261.95;

    return panels;
}

}  // namespace fixtures
