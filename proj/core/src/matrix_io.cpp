// Copyright 2026 The mclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mclab/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mclab/error.hpp"

namespace mclab {

namespace {

double parse_real(std::string_view s, std::string_view whole) {
    if (s == "+" || s.empty()) {
        return 1.0;
    }
    if (s == "-") {
        return -1.0;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, "bad scalar '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

cplx parse_scalar(std::string_view token) {
    if (token.empty()) {
        throw Error(ErrorCode::ParseError, "empty scalar");
    }
    if (token.back() != 'i') {
        return {parse_real(token, token), 0.0};
    }
    std::string_view body = token.substr(0, token.size() - 1);
    // The split point is the last sign that does not belong to an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        if (body.empty()) {
            return {0.0, 1.0};
        }
        return {0.0, parse_real(body, token)};
    }
    std::string_view re = body.substr(0, split);
    std::string_view im = body.substr(split);
    if (re.empty()) {
        throw Error(ErrorCode::ParseError, "bad scalar '" + std::string(token) + "'");
    }
    return {parse_real(re, token), parse_real(im, token)};
}

std::string format_scalar(cplx z, bool real) {
    char buf[64];
    if (real) {
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

Matrix read_matrix(std::istream &in) {
    std::size_t rows = 0, cols = 0;
    std::string kind;
    if (!(in >> rows >> cols >> kind)) {
        throw Error(ErrorCode::ParseError, "expected header 'rows cols real|complex'");
    }
    if (kind != "real" && kind != "complex") {
        throw Error(ErrorCode::ParseError, "matrix kind must be real or complex, got '" + kind + "'");
    }
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::ParseError, "matrix dimensions must be positive");
    }
    std::vector<cplx> data;
    data.reserve(rows * cols);
    std::string token;
    for (std::size_t k = 0; k < rows * cols; ++k) {
        if (!(in >> token)) {
            throw Error(ErrorCode::ParseError, "expected " + std::to_string(rows * cols) + " entries, got " +
                                                   std::to_string(k));
        }
        cplx z = parse_scalar(token);
        if (kind == "real" && z.imag() != 0.0) {
            throw Error(ErrorCode::ParseError, "complex entry '" + token + "' in a real matrix");
        }
        data.push_back(z);
    }
    Matrix m(rows, cols, std::move(data));
    if (!m.all_finite()) {
        throw Error(ErrorCode::ParseError, "matrix has non-finite entries");
    }
    return m;
}

void write_matrix(std::ostream &out, const Matrix &m) {
    const bool real = m.is_real();
    out << m.rows() << ' ' << m.cols() << ' ' << (real ? "real" : "complex") << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << format_scalar(m(i, j), real);
        }
        out << '\n';
    }
}

Matrix load_matrix(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return read_matrix(in);
}

void save_matrix(const std::filesystem::path &path, const Matrix &m) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    write_matrix(out, m);
}

}  // namespace mclab
