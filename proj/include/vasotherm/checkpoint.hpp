// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace vasotherm {

// Restartable simulation state. The averaging history window must ride along:
// without it the nonlocal production term cannot be rebuilt after a restart.
struct Checkpoint {
    double t = 0.0;
    int step_index = 0;
    std::vector<double> c, c_x;                       // concentration grid
    double history_plateau = 0.0;
    double history_window = 0.0;
    std::vector<double> history_times, history_values; // averaged temperature
    Eigen::VectorXd theta;                             // fluid then solid unknowns
    Eigen::VectorXd w, q;                              // last flow solution
};

// Binary layout: magic, version, payload size, FNV-1a checksum, payload.
std::string serialize_checkpoint(const Checkpoint& c);
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

} // namespace vasotherm
