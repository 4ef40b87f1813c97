#include "rotkp/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace rotkp {

namespace {

// Payloads are little-endian on disk regardless of host order.
void to_little_endian(double* data, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        (void)data;
        (void)n;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t u;
            std::memcpy(&u, &data[i], 8);
            u = __builtin_bswap64(u);
            std::memcpy(&data[i], &u, 8);
        }
    }
}

}  // namespace

void write_snapshot(const std::string& base_path, const ScalarField& f, double time,
                    const std::string& name) {
    nlohmann::json meta = {{"nx", f.grid.nx}, {"ny", f.grid.ny}, {"lx", f.grid.lx},
                           {"ly", f.grid.ly}, {"time", time},    {"name", name}};
    {
        std::ofstream js(base_path + ".json");
        if (!js) throw ValidationError("write_snapshot: cannot open " + base_path + ".json");
        js << meta.dump(2) << "\n";
    }
    std::vector<double> payload = f.v;
    to_little_endian(payload.data(), payload.size());
    std::ofstream bin(base_path + ".f64", std::ios::binary);
    if (!bin) throw ValidationError("write_snapshot: cannot open " + base_path + ".f64");
    bin.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
}

Snapshot read_snapshot(const std::string& base_path) {
    std::ifstream js(base_path + ".json");
    if (!js) throw ValidationError("read_snapshot: cannot open " + base_path + ".json");
    nlohmann::json meta = nlohmann::json::parse(js);
    const int nx = meta.at("nx").get<int>();
    const int ny = meta.at("ny").get<int>();
    Grid g = Grid::make(nx, ny, meta.at("lx").get<double>(), meta.at("ly").get<double>());

    Snapshot out;
    out.field = ScalarField(g);
    out.time = meta.at("time").get<double>();
    out.name = meta.value("name", "");

    std::ifstream bin(base_path + ".f64", std::ios::binary);
    if (!bin) throw ValidationError("read_snapshot: cannot open " + base_path + ".f64");
    bin.read(reinterpret_cast<char*>(out.field.v.data()),
             static_cast<std::streamsize>(out.field.v.size() * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(out.field.v.size() * sizeof(double)))
        throw ValidationError("read_snapshot: short payload in " + base_path + ".f64");
    to_little_endian(out.field.v.data(), out.field.v.size());
    return out;
}

}  // namespace rotkp
