#pragma once

// Persistence. The format follows the extension: ".csv" is text, ".bin" or ".json" is a JSON header
// next to a flat block of little-endian doubles (interleaved re/im).

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfpsi/cdmat.hpp"
#include "tfpsi/symclass.hpp"
#include "tfpsi/weyl.hpp"

namespace tfpsi {

namespace fs = std::filesystem;

/// Shortest text that reads back to the same double: printf "%.17g".
std::string format_double(double v);

void save_signal(const Signal& f, const fs::path& path);
Signal load_signal(const fs::path& path);

void save_symbol(const Symbol& s, const fs::path& path);
Symbol load_symbol(const fs::path& path);

void save_operator(const OperatorMatrix& op, const fs::path& path);
OperatorMatrix load_operator(const fs::path& path);

/// CSV rows (k, l, re, im).
void save_sequence(const LatticeSeq& a, const fs::path& path);
LatticeSeq load_sequence(const fs::path& path, const PhaseLattice& lattice);
LatticeSeq load_sequence(const fs::path& path);  // binary form only, lattice read from the header

/// CSV rows (rowK, rowL, colK, colL, re, im).
void save_matrix(const CDMatrix& a, const fs::path& path);
CDMatrix load_matrix(const fs::path& path, const PhaseLattice& lattice);
CDMatrix load_matrix(const fs::path& path);  // binary form only

/// CSV rows (zeta1, zeta2, value).
void save_grand_symbol(const GrandSymbol& g, const fs::path& path);

/// CSV with a header row and one row per record.
void save_table(const fs::path& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

nlohmann::json to_json(const AlgebraSpec& spec);
AlgebraSpec algebra_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WeightSpec& w);
WeightSpec weight_spec_from_json(const nlohmann::json& j);

/// Writes the window next to the header as <stem>.window.bin and the header as JSON at path.
void save_gabor_system(const GaborSystem& sys, const fs::path& path);
GaborSystem load_gabor_system(const fs::path& path);

}  // namespace tfpsi
