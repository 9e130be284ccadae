// SPDX-License-Identifier: Apache-2.0
//
// moma-sim: link-level simulator for multi-service oriented multiple access
// Copyright (C) 2026 The moma-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "moma/config.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace moma {

enum class CodeKind
{
    Hadamard,
    Dft
};

enum class OverloadingGeneration
{
    RandomSphere,
    Identity
};

std::string_view to_string(CodeKind kind);
std::string_view to_string(OverloadingGeneration gen);
CodeKind parse_code_kind(std::string_view text);
OverloadingGeneration parse_overloading_generation(std::string_view text);

// Unitary N x N code matrix, columns scaled to unit norm.
struct CodeMatrix
{
    CodeKind kind;
    int order;
    Eigen::MatrixXcd entries;
};

// Disjoint split of the code matrix columns between the MD and LD classes.
// The first n_md columns go to MD, the rest to LD.
struct ClassPartition
{
    Eigen::MatrixXcd u_md;
    Eigen::MatrixXcd u_ld;
    std::vector<int> md_columns;
    std::vector<int> ld_columns;

    const Eigen::MatrixXcd &basis(UserClass cls) const { return cls == UserClass::MD ? u_md : u_ld; }
};

// N_c x K_c matrix of unit-norm overloading sequences.
struct OverloadingMatrix
{
    UserClass user_class;
    Eigen::MatrixXcd w;
    OverloadingGeneration generation;
    std::uint64_t seed;
};

// Effective spreading codes U_c * w_k, MD users first.
struct SignatureSet
{
    std::vector<Eigen::VectorXcd> signatures;
    std::vector<UserClass> classes;
    std::vector<int> sequence_index; // column of W_c the user was given

    std::size_t size() const { return signatures.size(); }
};

CodeMatrix build_code_matrix(CodeKind kind, int order);

ClassPartition partition(const CodeMatrix &u, int n_md);

OverloadingMatrix build_overloading(UserClass cls, int n_c, int k_c, OverloadingGeneration generation,
                                    std::uint64_t seed);

SignatureSet make_signatures(const ClassPartition &part, const OverloadingMatrix &w_md, const OverloadingMatrix &w_ld);

// Signature of the user holding column `sequence` of `w`.
Eigen::VectorXcd signature_of(const ClassPartition &part, const OverloadingMatrix &w, int sequence);

// G(i, j) = s_i^H s_j
Eigen::MatrixXcd gram(const SignatureSet &sig);

// Number of singular values above `tol`.
int numerical_rank(const Eigen::MatrixXcd &m, double tol = 1e-9);

} // namespace moma
