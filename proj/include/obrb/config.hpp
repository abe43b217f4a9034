#pragma once

#include <cstdint>
#include <string>

#include "obrb/params.hpp"

namespace obrb {

/// Initial temperature: a closed-form sum (possibly with bump / equilibrium /
/// seeded-random terms), or a checkpoint file.
struct Theta0Spec {
    enum class Term { constant, linear_x, linear_y, harmonic_xy, bump, random, equilibrium };
    struct Entry {
        Term term;
        double coeff = 0;
    };
    std::vector<Entry> entries; // empty means zero
    std::string file;           // when set, overrides entries

    static Theta0Spec parse(const std::string &text);
    std::string to_string() const;
};

/// Initial velocity: zero, a seeded random divergence-free field, the smooth
/// single-cell swirl eigenmode, or a checkpoint file.
struct U0Spec {
    enum class Kind { zero, random_divfree, eigenmode, file };
    Kind kind = Kind::zero;
    double amplitude = 0;
    std::string file;

    static U0Spec parse(const std::string &text);
    std::string to_string() const;
};

/// Fully validated run configuration, parsed from the line-oriented
/// "[section]" / "key = value" format ('#' starts a comment).
struct RunConfig {
    // [grid]
    int nx = 0, ny = 0;
    double lx = 0, ly = 0;
    // [physics] (+ numerics defaults; exactly one of alpha/gamma in the file)
    Params params;
    // [run]
    double t_end = 0;
    double output_every = 0.1;
    double checkpoint_every = 0; // 0 = only final
    std::string out_dir = "out";
    // [initial]
    Theta0Spec theta0;
    U0Spec u0;
};

/// Parses and validates config text. Unknown sections or keys, missing
/// required keys, type mismatches and constraint violations all throw
/// config_error naming the offending line.
RunConfig parse_config(const std::string &text);

RunConfig load_config(const std::string &path);

} // namespace obrb
