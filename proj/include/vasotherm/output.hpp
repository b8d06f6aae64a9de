// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/deformation.hpp"
#include "vasotherm/fem.hpp"

#include <string>
#include <vector>

namespace vasotherm {

// Replace-atomically: write to a sibling temp file, then rename, so
// interrupted runs never leave torn outputs.
void atomic_write(const std::string& path, const std::string& content);

// Legacy ASCII unstructured-grid snapshot of one subdomain, with the points
// moved to their deformed positions.
void write_vtk_snapshot(const std::string& path, const ReferenceMesh& mesh,
                        const ScalarSpace& space, double t, const DeformationField& def,
                        const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& scalars,
                        const std::vector<std::pair<std::string, std::function<Eigen::Vector3d(
                                                                     int /*vertex*/)>>>& vectors);

// Append-style CSV held in memory and rewritten atomically on every flush.
class CsvWriter {
public:
    CsvWriter() = default;
    CsvWriter(std::string path, std::vector<std::string> columns);
    void append(const std::vector<double>& row);
    void flush() const;
    const std::string& text() const { return body_; }

private:
    std::string path_;
    std::string body_;
    std::size_t n_cols_ = 0;
};

} // namespace vasotherm
