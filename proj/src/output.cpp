// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/output.hpp"

#include "vasotherm/common.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vasotherm {

void atomic_write(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), "cannot open '" + tmp + "' for writing");
        out << content;
        require(out.good(), "write failed on '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    require(!ec, "atomic rename failed for '" + path + "'");
}

namespace {

void format_double(std::ostringstream& os, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

} // namespace

void write_vtk_snapshot(
    const std::string& path, const ReferenceMesh& mesh, const ScalarSpace& space, double t,
    const DeformationField& def,
    const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& scalars,
    const std::vector<std::pair<std::string, std::function<Eigen::Vector3d(int)>>>& vectors)
{
    std::ostringstream os;
    os << "# vtk DataFile Version 4.2\n";
    os << "t=" << t << "\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";

    const int n_points = space.n_dofs();
    os << "POINTS " << n_points << " double\n";
    for (int d = 0; d < n_points; ++d) {
        const Eigen::Vector3d x = def.map_point(t, mesh.vertices[space.dof_vertex(d)]);
        std::ostringstream line;
        format_double(line, x[0]);
        line << " ";
        format_double(line, x[1]);
        line << " ";
        format_double(line, x[2]);
        os << line.str() << "\n";
    }

    const auto& cells = space.cells();
    os << "CELLS " << cells.size() << " " << 5 * cells.size() << "\n";
    for (int c : cells) {
        os << 4;
        for (int v : mesh.cells[c])
            os << " " << space.vertex_dof(v);
        os << "\n";
    }
    os << "CELL_TYPES " << cells.size() << "\n";
    for (std::size_t i = 0; i < cells.size(); ++i)
        os << "10\n"; // tetrahedron

    os << "POINT_DATA " << n_points << "\n";
    for (const auto& [name, vec] : scalars) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int d = 0; d < n_points; ++d) {
            std::ostringstream line;
            format_double(line, (*vec)[d]);
            os << line.str() << "\n";
        }
    }
    for (const auto& [name, fn] : vectors) {
        os << "VECTORS " << name << " double\n";
        for (int d = 0; d < n_points; ++d) {
            const Eigen::Vector3d v = fn(space.dof_vertex(d));
            std::ostringstream line;
            format_double(line, v[0]);
            line << " ";
            format_double(line, v[1]);
            line << " ";
            format_double(line, v[2]);
            os << line.str() << "\n";
        }
    }
    atomic_write(path, os.str());
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), n_cols_(columns.size())
{
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << "\n";
    body_ = os.str();
}

void CsvWriter::append(const std::vector<double>& row)
{
    require(row.size() == n_cols_, "csv: column count mismatch");
    std::ostringstream os;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i)
            os << ",";
        format_double(os, row[i]);
    }
    os << "\n";
    body_ += os.str();
}

void CsvWriter::flush() const
{
    if (!path_.empty())
        atomic_write(path_, body_);
}

} // namespace vasotherm
