#include "tfpsi/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tfpsi {

namespace {

using nlohmann::json;

enum class Format { csv, binary };

Format format_of(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv") return Format::csv;
    if (ext == ".bin" || ext == ".json") return Format::binary;
    throw Error(ErrorKind::config, path.string() + ": unknown extension '" + ext + "' (expected .csv, .bin or .json)");
}

fs::path header_path(const fs::path& p) { return fs::path(p).replace_extension(".json"); }
fs::path data_path(const fs::path& p) { return fs::path(p).replace_extension(".bin"); }

std::ofstream open_out(const fs::path& path, bool binary) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw Error(ErrorKind::config, path.string() + ": cannot open for writing");
    return out;
}

std::ifstream open_in(const fs::path& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw Error(ErrorKind::parse, path.string() + ": cannot open for reading");
    return in;
}

std::uint64_t swap_if_big(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0x00000000FFFFFFFFULL) << 32) | ((v & 0xFFFFFFFF00000000ULL) >> 32);
        v = ((v & 0x0000FFFF0000FFFFULL) << 16) | ((v & 0xFFFF0000FFFF0000ULL) >> 16);
        v = ((v & 0x00FF00FF00FF00FFULL) << 8) | ((v & 0xFF00FF00FF00FF00ULL) >> 8);
    }
    return v;
}

void write_binary(const fs::path& path, json header, const std::vector<cd>& values) {
    const fs::path data = data_path(path);
    header["dtype"] = "complex128le";
    header["count"] = values.size();
    header["data"] = data.filename().string();
    {
        auto out = open_out(data, true);
        for (const cd& v : values) {
            for (double part : {v.real(), v.imag()}) {
                const std::uint64_t bits = swap_if_big(std::bit_cast<std::uint64_t>(part));
                out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
            }
        }
    }
    auto out = open_out(header_path(path), false);
    out << header.dump(2) << '\n';
}

std::pair<json, std::vector<cd>> read_binary(const fs::path& path, const std::string& kind) {
    json header;
    {
        auto in = open_in(header_path(path), false);
        try {
            in >> header;
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse, header_path(path).string() + ": malformed header: " + e.what());
        }
    }
    if (header.value("kind", std::string()) != kind) {
        throw Error(ErrorKind::parse, header_path(path).string() + ": field 'kind': expected '" + kind + "'");
    }
    if (header.value("dtype", std::string()) != "complex128le") {
        throw Error(ErrorKind::parse, header_path(path).string() + ": field 'dtype': expected 'complex128le'");
    }
    const auto count = header.at("count").get<std::size_t>();
    const fs::path data = path.parent_path() / header.at("data").get<std::string>();
    auto in = open_in(data, true);
    std::vector<cd> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits[2];
        if (!in.read(reinterpret_cast<char*>(bits), sizeof bits)) {
            throw Error(ErrorKind::parse, data.string() + ": truncated at value " + std::to_string(i));
        }
        values[i] = {std::bit_cast<double>(swap_if_big(bits[0])), std::bit_cast<double>(swap_if_big(bits[1]))};
    }
    if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorKind::parse, data.string() + ": trailing bytes after " + std::to_string(count) + " values");
    return {header, values};
}

/// Rows of a CSV file with the given header; every field must parse as a number.
std::vector<std::vector<double>> read_csv(const fs::path& path, const std::vector<std::string>& columns) {
    auto in = open_in(path, false);
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, path.string() + ": empty file");
    ++row;
    std::vector<std::vector<double>> out;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() != columns.size()) {
            throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(row) + ": expected " +
                                              std::to_string(columns.size()) + " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> values(columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const std::string& f = fields[c];
            const char* first = f.data();
            const char* last = f.data() + f.size();
            while (first < last && *first == ' ') ++first;
            while (last > first && last[-1] == ' ') --last;
            const auto res = std::from_chars(first, last, values[c]);
            if (res.ec != std::errc() || res.ptr != last || first == last) {
                throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(row) + ", field '" + columns[c] +
                                                  "': cannot parse '" + f + "'");
            }
        }
        out.push_back(std::move(values));
    }
    return out;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path, false);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << format_double(r[c]);
        out << '\n';
    }
}

long as_index(double v, const fs::path& path, std::size_t row, const std::string& field, long limit) {
    const double r = std::round(v);
    if (r != v || r < 0 || r >= static_cast<double>(limit)) {
        throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(row + 2) + ", field '" + field +
                                          "': index out of range");
    }
    return static_cast<long>(r);
}

/// Square side for a grid read from CSV; must be odd.
long infer_side(std::size_t count, const fs::path& path) {
    const auto n = static_cast<long>(std::llround(std::sqrt(static_cast<double>(count))));
    if (n * n != static_cast<long>(count) || n == 0) {
        throw Error(ErrorKind::parse, path.string() + ": expected N*N rows, got " + std::to_string(count));
    }
    require_odd(n, path.string().c_str());
    return n;
}

json lattice_json(const PhaseLattice& lat) { return {{"n", lat.n()}, {"alpha", lat.alpha()}, {"beta", lat.beta()}}; }

PhaseLattice lattice_from(const json& h) {
    return PhaseLattice(h.at("n").get<long>(), h.at("alpha").get<long>(), h.at("beta").get<long>());
}

Eigen::MatrixXcd grid_from_csv(const fs::path& path, const std::vector<std::string>& cols) {
    const auto rows = read_csv(path, cols);
    const long n = infer_side(rows.size(), path);
    Eigen::MatrixXcd m(n, n);
    std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const long a = as_index(rows[r][0], path, r, cols[0], n);
        const long b = as_index(rows[r][1], path, r, cols[1], n);
        auto& s = seen[static_cast<std::size_t>(a * n + b)];
        if (s) throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(r + 2) + ": duplicate entry");
        s = 1;
        m(a, b) = {rows[r][2], rows[r][3]};
    }
    return m;
}

void grid_to_csv(const Eigen::MatrixXcd& m, const fs::path& path, const std::vector<std::string>& cols) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            rows.push_back({static_cast<double>(a), static_cast<double>(b), m(a, b).real(), m(a, b).imag()});
        }
    }
    write_csv(path, cols, rows);
}

std::vector<cd> flatten(const Eigen::MatrixXcd& m) {
    std::vector<cd> v;
    v.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) v.push_back(m(a, b));
    }
    return v;
}

Eigen::MatrixXcd unflatten(const std::vector<cd>& v, long rows, long cols, const fs::path& path) {
    if (static_cast<long>(v.size()) != rows * cols) throw Error(ErrorKind::parse, path.string() + ": value count does not match shape");
    Eigen::MatrixXcd m(rows, cols);
    for (long a = 0; a < rows; ++a) {
        for (long b = 0; b < cols; ++b) m(a, b) = v[static_cast<std::size_t>(a * cols + b)];
    }
    return m;
}

const std::vector<std::string> kSignalCols{"t", "re", "im"};
const std::vector<std::string> kSymbolCols{"x", "xi", "re", "im"};
const std::vector<std::string> kOperatorCols{"row", "col", "re", "im"};
const std::vector<std::string> kSequenceCols{"k", "l", "re", "im"};
const std::vector<std::string> kMatrixCols{"rowK", "rowL", "colK", "colL", "re", "im"};

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void save_signal(const Signal& f, const fs::path& path) {
    if (format_of(path) == Format::binary) {
        std::vector<cd> v(f.values().data(), f.values().data() + f.values().size());
        write_binary(path, {{"kind", "signal"}, {"n", f.n()}}, v);
        return;
    }
    std::vector<std::vector<double>> rows;
    for (long t = 0; t < f.n(); ++t) rows.push_back({static_cast<double>(t), f[t].real(), f[t].imag()});
    write_csv(path, kSignalCols, rows);
}

Signal load_signal(const fs::path& path) {
    if (format_of(path) == Format::binary) {
        auto [h, v] = read_binary(path, "signal");
        const long n = h.at("n").get<long>();
        require_odd(n, path.string().c_str());
        if (static_cast<long>(v.size()) != n) throw Error(ErrorKind::parse, path.string() + ": value count does not match n");
        return Signal(Eigen::Map<Eigen::VectorXcd>(v.data(), n));
    }
    const auto rows = read_csv(path, kSignalCols);
    const auto n = static_cast<long>(rows.size());
    require_odd(n, path.string().c_str());
    Eigen::VectorXcd v(n);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const long t = as_index(rows[r][0], path, r, "t", n);
        if (seen[static_cast<std::size_t>(t)]) throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(r + 2) + ": duplicate entry");
        seen[static_cast<std::size_t>(t)] = 1;
        v(t) = {rows[r][1], rows[r][2]};
    }
    return Signal(v);
}

void save_symbol(const Symbol& s, const fs::path& path) {
    if (format_of(path) == Format::binary) {
        write_binary(path, {{"kind", "symbol"}, {"n", s.n()}}, flatten(s.values()));
        return;
    }
    grid_to_csv(s.values(), path, kSymbolCols);
}

Symbol load_symbol(const fs::path& path) {
    if (format_of(path) == Format::binary) {
        auto [h, v] = read_binary(path, "symbol");
        const long n = h.at("n").get<long>();
        require_odd(n, path.string().c_str());
        return Symbol(unflatten(v, n, n, path));
    }
    return Symbol(grid_from_csv(path, kSymbolCols));
}

void save_operator(const OperatorMatrix& op, const fs::path& path) {
    if (format_of(path) == Format::binary) {
        write_binary(path, {{"kind", "operator"}, {"n", op.n()}}, flatten(op.entries()));
        return;
    }
    grid_to_csv(op.entries(), path, kOperatorCols);
}

OperatorMatrix load_operator(const fs::path& path) {
    if (format_of(path) == Format::binary) {
        auto [h, v] = read_binary(path, "operator");
        const long n = h.at("n").get<long>();
        require_odd(n, path.string().c_str());
        return OperatorMatrix(unflatten(v, n, n, path));
    }
    return OperatorMatrix(grid_from_csv(path, kOperatorCols));
}

void save_sequence(const LatticeSeq& a, const fs::path& path) {
    const auto& lat = a.lattice();
    if (format_of(path) == Format::binary) {
        json h = lattice_json(lat);
        h["kind"] = "sequence";
        write_binary(path, h, a.values());
        return;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto [k, l] = lat.indices(i);
        rows.push_back({static_cast<double>(k), static_cast<double>(l), a[i].real(), a[i].imag()});
    }
    write_csv(path, kSequenceCols, rows);
}

LatticeSeq load_sequence(const fs::path& path) {
    if (format_of(path) != Format::binary) throw Error(ErrorKind::config, path.string() + ": CSV sequences need an explicit lattice");
    auto [h, v] = read_binary(path, "sequence");
    return LatticeSeq(lattice_from(h), std::move(v));
}

LatticeSeq load_sequence(const fs::path& path, const PhaseLattice& lattice) {
    if (format_of(path) == Format::binary) {
        LatticeSeq a = load_sequence(path);
        if (!(a.lattice() == lattice)) throw Error(ErrorKind::structural, path.string() + ": lattice differs from the requested one");
        return a;
    }
    const auto rows = read_csv(path, kSequenceCols);
    if (rows.size() != lattice.size()) throw Error(ErrorKind::parse, path.string() + ": expected one row per lattice point");
    LatticeSeq a(lattice);
    std::vector<char> seen(lattice.size(), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const long k = as_index(rows[r][0], path, r, "k", lattice.rows());
        const long l = as_index(rows[r][1], path, r, "l", lattice.cols());
        const std::size_t i = lattice.index(k, l);
        if (seen[i]) throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(r + 2) + ": duplicate entry");
        seen[i] = 1;
        a[i] = {rows[r][2], rows[r][3]};
    }
    return a;
}

void save_matrix(const CDMatrix& a, const fs::path& path) {
    const auto& lat = a.lattice();
    if (format_of(path) == Format::binary) {
        json h = lattice_json(lat);
        h["kind"] = "matrix";
        write_binary(path, h, flatten(a.entries()));
        return;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto [rk, rl] = lat.indices(i);
        for (std::size_t j = 0; j < a.size(); ++j) {
            const auto [ck, cl] = lat.indices(j);
            const cd v = a(i, j);
            rows.push_back({static_cast<double>(rk), static_cast<double>(rl), static_cast<double>(ck), static_cast<double>(cl), v.real(), v.imag()});
        }
    }
    write_csv(path, kMatrixCols, rows);
}

CDMatrix load_matrix(const fs::path& path) {
    if (format_of(path) != Format::binary) throw Error(ErrorKind::config, path.string() + ": CSV matrices need an explicit lattice");
    auto [h, v] = read_binary(path, "matrix");
    const PhaseLattice lat = lattice_from(h);
    const auto s = static_cast<long>(lat.size());
    return CDMatrix(lat, unflatten(v, s, s, path));
}

CDMatrix load_matrix(const fs::path& path, const PhaseLattice& lattice) {
    if (format_of(path) == Format::binary) {
        CDMatrix a = load_matrix(path);
        if (!(a.lattice() == lattice)) throw Error(ErrorKind::structural, path.string() + ": lattice differs from the requested one");
        return a;
    }
    const auto rows = read_csv(path, kMatrixCols);
    const std::size_t size = lattice.size();
    if (rows.size() != size * size) throw Error(ErrorKind::parse, path.string() + ": expected one row per lattice pair");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    std::vector<char> seen(size * size, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t i = lattice.index(as_index(rows[r][0], path, r, "rowK", lattice.rows()), as_index(rows[r][1], path, r, "rowL", lattice.cols()));
        const std::size_t j = lattice.index(as_index(rows[r][2], path, r, "colK", lattice.rows()), as_index(rows[r][3], path, r, "colL", lattice.cols()));
        if (seen[i * size + j]) throw Error(ErrorKind::parse, path.string() + ": row " + std::to_string(r + 2) + ": duplicate entry");
        seen[i * size + j] = 1;
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {rows[r][4], rows[r][5]};
    }
    return CDMatrix(lattice, std::move(m));
}

void save_grand_symbol(const GrandSymbol& g, const fs::path& path) {
    std::vector<std::vector<double>> rows;
    for (long a = 0; a < g.n(); ++a) {
        for (long b = 0; b < g.n(); ++b) rows.push_back({static_cast<double>(a), static_cast<double>(b), g.values(a, b)});
    }
    write_csv(path, {"zeta1", "zeta2", "value"}, rows);
}

void save_table(const fs::path& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    write_csv(path, header, rows);
}

json to_json(const WeightSpec& w) {
    switch (w.kind) {
        case WeightSpec::Kind::flat:
            return {{"weightKind", "flat"}};
        case WeightSpec::Kind::polynomial:
            return {{"weightKind", "polynomial"}, {"s", w.s}};
        case WeightSpec::Kind::subexponential:
            return {{"weightKind", "subexponential"}, {"delta", w.delta}, {"b", w.b}};
    }
    return {};
}

WeightSpec weight_spec_from_json(const json& j) {
    const std::string kind = j.value("weightKind", std::string("flat"));
    if (kind == "flat") return WeightSpec::flat();
    if (kind == "polynomial") return WeightSpec::polynomial(j.value("s", 0.0));
    if (kind == "subexponential") return WeightSpec::subexponential(j.value("delta", 0.2), j.value("b", 0.5));
    throw Error(ErrorKind::config, "weightKind: unknown weight kind '" + kind + "'");
}

json to_json(const AlgebraSpec& spec) {
    json j = to_json(spec.weight);
    j.update(lattice_json(spec.lattice));
    j["q"] = spec.q == Exponent::one ? json(1) : json("inf");
    return j;
}

AlgebraSpec algebra_spec_from_json(const json& j) {
    Exponent q = Exponent::one;
    if (j.contains("q")) {
        const json& v = j.at("q");
        if (v.is_string() && (v == "inf" || v == "infinity")) {
            q = Exponent::infinity;
        } else if (v.is_number() && v.get<double>() == 1.0) {
            q = Exponent::one;
        } else {
            throw Error(ErrorKind::config, "q: expected 1 or \"inf\"");
        }
    }
    return AlgebraSpec::make(weight_spec_from_json(j), q, lattice_from(j));
}

void save_gabor_system(const GaborSystem& sys, const fs::path& path) {
    const fs::path window = fs::path(path).replace_extension(".window.bin");
    save_signal(sys.window(), window);
    json h = lattice_json(sys.lattice());
    h["kind"] = "gaborSystem";
    h["window"] = window.filename().string();
    h["tight"] = sys.tight();
    auto out = open_out(path, false);
    out << h.dump(2) << '\n';
}

GaborSystem load_gabor_system(const fs::path& path) {
    json h;
    {
        auto in = open_in(path, false);
        try {
            in >> h;
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse, path.string() + ": malformed header: " + e.what());
        }
    }
    const Signal g = load_signal(path.parent_path() / h.at("window").get<std::string>());
    return GaborSystem(g, lattice_from(h));
}

}  // namespace tfpsi
