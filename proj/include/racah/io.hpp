#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include "racah/analysis.hpp"
#include "racah/core.hpp"

// Interchange formats: matrix CSV with a self-describing header line,
// binary PGM (P5) images, and the splitmix64 generator for reproducible
// random test images.

namespace racah::io {

// First line: `# racah a=<> b=<> alpha=<> beta=<> N=<> alg=<>`, then one
// comma-separated row per degree n. 17 significant digits round-trip
// doubles bit-exactly.
inline void write_matrix_csv(std::ostream& os, const PolyMatrix& m, const std::string& alg) {
    const RacahParams& p = m.params();
    char buf[64];
    os << "# racah a=" << p.a << " b=" << p.b << " alpha=" << p.alpha << " beta=" << p.beta
       << " N=" << p.n_size << " alg=" << alg << "\n";
    for (int n = 0; n < m.rows(); ++n) {
        for (int x = 0; x < m.n_size(); ++x) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(n, x));
            os << (x ? "," : "") << buf;
        }
        os << "\n";
    }
}

inline void write_matrix_csv(const std::string& path, const PolyMatrix& m,
                             const std::string& alg) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_matrix_csv(os, m, alg);
}

struct LoadedMatrix {
    PolyMatrix matrix;
    std::string alg;
};

inline LoadedMatrix read_matrix_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# racah", 0) != 0)
        throw Error("matrix CSV: missing '# racah' header line");
    double a = 0, b = 0, al = 0, be = 0;
    int N = 0;
    std::string alg = "?";
    std::istringstream hs(header.substr(7));
    std::string tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "a") a = std::stod(val);
            else if (key == "b") b = std::stod(val);
            else if (key == "alpha") al = std::stod(val);
            else if (key == "beta") be = std::stod(val);
            else if (key == "N") N = std::stoi(val);
            else if (key == "alg") alg = val;
        } catch (const std::exception&) {
            throw Error("matrix CSV: bad header field '" + tok + "'");
        }
    }
    RacahParams p = validate_params(a, b, al, be);
    if (p.n_size != N) throw Error("matrix CSV: header N does not match b - a");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            double v = 0;
            size_t pos = 0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos == 0) throw Error("matrix CSV: bad cell '" + cell + "'");
            row.push_back(v);
        }
        if (static_cast<int>(row.size()) != N)
            throw Error("matrix CSV: row has " + std::to_string(row.size()) + " cells, want " +
                        std::to_string(N));
        rows.push_back(std::move(row));
    }
    if (rows.empty() || static_cast<int>(rows.size()) > N)
        throw Error("matrix CSV: bad row count " + std::to_string(rows.size()));
    PolyMatrix m(p, static_cast<int>(rows.size()) - 1);
    for (int n = 0; n < static_cast<int>(rows.size()); ++n)
        for (int x = 0; x < N; ++x) m.at(n, x) = rows[n][x];
    return {std::move(m), alg};
}

inline LoadedMatrix read_matrix_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_matrix_csv(is);
}

// 8-bit binary PGM; values are clamped and rounded on write, promoted to
// real on load.
inline void write_pgm(const std::string& path, const analysis::ImageGrid& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "P5\n" << img.cols << " " << img.rows << "\n255\n";
    for (double v : img.pixels) {
        double c = std::min(255.0, std::max(0.0, std::round(v)));
        char byte = static_cast<char>(static_cast<unsigned char>(c));
        os.write(&byte, 1);
    }
}

inline analysis::ImageGrid read_pgm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    std::string magic;
    is >> magic;
    if (magic != "P5") throw Error(path + ": not a binary PGM (P5) file");
    auto next_int = [&is, &path]() {
        // skip whitespace and '#' comment lines
        for (;;) {
            int c = is.peek();
            if (c == '#') {
                std::string junk;
                std::getline(is, junk);
            } else if (std::isspace(c)) {
                is.get();
            } else {
                break;
            }
        }
        int v;
        if (!(is >> v)) throw Error(path + ": malformed PGM header");
        return v;
    };
    int w = next_int(), h = next_int(), maxval = next_int();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw Error(path + ": unsupported PGM geometry");
    is.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(static_cast<size_t>(w) * h);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (is.gcount() != static_cast<std::streamsize>(raw.size()))
        throw Error(path + ": truncated PGM payload");
    analysis::ImageGrid img{h, w, std::vector<double>(raw.size())};
    for (size_t i = 0; i < raw.size(); ++i) img.pixels[i] = static_cast<double>(raw[i]);
    return img;
}

// splitmix64; the constants are the generator's specification.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline analysis::ImageGrid random_image(int rows, int cols, uint64_t seed) {
    analysis::ImageGrid img{rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols)};
    uint64_t state = seed;
    for (double& v : img.pixels) v = static_cast<double>(splitmix64(state) % 256);
    return img;
}

}  // namespace racah::io
