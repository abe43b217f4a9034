#include "obrb/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "obrb/errors.hpp"

namespace obrb {

namespace {

constexpr char kMagic[8] = {'O', 'B', 'R', 'B', '0', '0', '0', '1'};

void put_u64(std::ofstream &os, std::uint64_t v) {
    unsigned char b[8];
    for (int k = 0; k < 8; ++k)
        b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
    os.write(reinterpret_cast<const char *>(b), 8);
}

std::uint64_t get_u64(std::ifstream &is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char *>(b), 8);
    if (!is)
        throw io_error("checkpoint: truncated file");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k)
        v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}

void put_f64(std::ofstream &os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::ifstream &is) { return std::bit_cast<double>(get_u64(is)); }

void put_array(std::ofstream &os, const std::vector<double> &v) {
    for (double x : v)
        put_f64(os, x);
}

void get_array(std::ifstream &is, std::vector<double> &v) {
    for (double &x : v)
        x = get_f64(is);
}

} // namespace

void checkpoint_write(const SimState &state, const std::string &path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw io_error("checkpoint_write: cannot open " + path);
    const Grid &g = state.theta.grid();
    os.write(kMagic, 8);
    put_u64(os, static_cast<std::uint64_t>(g.nx));
    put_u64(os, static_cast<std::uint64_t>(g.ny));
    put_f64(os, g.lx);
    put_f64(os, g.ly);
    put_f64(os, state.t);
    put_u64(os, static_cast<std::uint64_t>(state.step));
    put_array(os, state.theta.data());
    put_array(os, state.u.ux_data());
    put_array(os, state.u.uy_data());
    if (!os)
        throw io_error("checkpoint_write: write failed for " + path);
}

SimState checkpoint_read(const std::string &path, const Grid *expected) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw io_error("checkpoint_read: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw io_error("checkpoint_read: bad magic in " + path);
    const auto nx = static_cast<int>(get_u64(is));
    const auto ny = static_cast<int>(get_u64(is));
    const double lx = get_f64(is);
    const double ly = get_f64(is);
    const double t = get_f64(is);
    const auto step = static_cast<std::int64_t>(get_u64(is));

    Grid g = build_grid(nx, ny, lx, ly);
    if (expected && !expected->same_as(g))
        throw io_error("checkpoint_read: grid mismatch, file has " + std::to_string(nx) + "x" +
                       std::to_string(ny) + " on " + std::to_string(lx) + "x" +
                       std::to_string(ly) + ", run expects " + std::to_string(expected->nx) + "x" +
                       std::to_string(expected->ny) + " on " + std::to_string(expected->lx) + "x" +
                       std::to_string(expected->ly));

    SimState s(g);
    s.t = t;
    s.step = step;
    get_array(is, s.theta.data());
    get_array(is, s.u.ux_data());
    get_array(is, s.u.uy_data());
    if (!is)
        throw io_error("checkpoint_read: truncated file " + path);
    return s;
}

} // namespace obrb
