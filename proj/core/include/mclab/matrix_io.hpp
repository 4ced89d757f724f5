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

#ifndef MCLAB_MATRIX_IO_HPP
#define MCLAB_MATRIX_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mclab/matrix.hpp"

namespace mclab {

// Text format:
//
//   rows cols real|complex
//   a00 a01 ...
//   ...
//
// Complex entries are written "re+imi" / "re-imi" (e.g. 1.5-0.25i). A bare
// real number or a bare imaginary number ("2i") is also accepted on input.

cplx parse_scalar(std::string_view token);
std::string format_scalar(cplx z, bool real);

Matrix read_matrix(std::istream &in);
void write_matrix(std::ostream &out, const Matrix &m);

Matrix load_matrix(const std::filesystem::path &path);
void save_matrix(const std::filesystem::path &path, const Matrix &m);

}  // namespace mclab

#endif  // MCLAB_MATRIX_IO_HPP
