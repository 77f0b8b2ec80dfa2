#pragma once

#include "degen/evolution.hpp"

#include <string>

namespace degen {

/// Problem file: one JSON document
///   {"dim": n, "M": [[re, im], ...], "L": [...], "norm": "l2" | "linf", "T": T,
///    "u0": [[re, im], ...], "v0": [...]?, "g0": [...]?,
///    "f": {"kind": "polynomial", "coefficients": [[[re, im], ...], ...], "mu": mu}
///       | {"kind": "samples", "times": [...], "values": [[[re, im], ...], ...], "mu": mu}}
/// with M and L stored row-major. Doubles are written in shortest round-trip
/// form, so save followed by load reproduces every entry bit for bit.
ProblemInstance problem_from_json(const std::string& text, const RunConfig& cfg = default_config());
std::string problem_to_json(const ProblemInstance& prob);

/// Throws ParseError (with location) for malformed files and
/// ValidationError when the problem invariants fail.
ProblemInstance load_problem(const std::string& path, const RunConfig& cfg = default_config());
void save_problem(const std::string& path, const ProblemInstance& prob);

/// Writes text with LF line endings, replacing any existing file.
void save_report(const std::string& path, const std::string& text);

}  // namespace degen
