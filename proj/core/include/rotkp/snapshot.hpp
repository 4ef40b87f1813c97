#pragma once

#include <string>

#include "rotkp/grid.hpp"

namespace rotkp {

/// Field snapshot: a JSON metadata document {nx, ny, lx, ly, time, name} at
/// <base>.json plus a raw payload of nx*ny little-endian 8-byte IEEE floats at
/// <base>.f64, row-major with y as the outer index.
void write_snapshot(const std::string& base_path, const ScalarField& f, double time,
                    const std::string& name);

struct Snapshot {
    ScalarField field;
    double time = 0.0;
    std::string name;
};

Snapshot read_snapshot(const std::string& base_path);

}  // namespace rotkp
