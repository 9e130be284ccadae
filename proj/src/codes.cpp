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

#include "moma/codes.hpp"

#include "moma/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace moma {

std::string_view to_string(CodeKind kind) { return kind == CodeKind::Hadamard ? "hadamard" : "dft"; }

std::string_view to_string(OverloadingGeneration gen)
{
    return gen == OverloadingGeneration::RandomSphere ? "random_sphere" : "identity";
}

CodeKind parse_code_kind(std::string_view text)
{
    if (text == "hadamard")
        return CodeKind::Hadamard;
    if (text == "dft")
        return CodeKind::Dft;
    throw std::invalid_argument("unknown code kind '" + std::string(text) + "'");
}

OverloadingGeneration parse_overloading_generation(std::string_view text)
{
    if (text == "random_sphere")
        return OverloadingGeneration::RandomSphere;
    if (text == "identity")
        return OverloadingGeneration::Identity;
    throw std::invalid_argument("unknown overloading generation '" + std::string(text) + "'");
}

CodeMatrix build_code_matrix(CodeKind kind, int order)
{
    if (order < 2)
        throw std::invalid_argument("code order must be at least 2");

    Eigen::MatrixXcd u(order, order);
    if (kind == CodeKind::Hadamard)
    {
        if ((order & (order - 1)) != 0)
            throw std::invalid_argument("invalid order " + std::to_string(order) +
                                        ": Walsh-Hadamard needs a power of two");
        // Sylvester construction: H[r,c] = (-1)^popcount(r & c)
        const double scale = 1.0 / std::sqrt(static_cast<double>(order));
        for (int r = 0; r < order; ++r)
            for (int c = 0; c < order; ++c)
                u(r, c) = (std::popcount(static_cast<unsigned>(r & c)) % 2 ? -scale : scale);
    }
    else
    {
        const double scale = 1.0 / std::sqrt(static_cast<double>(order));
        for (int r = 0; r < order; ++r)
            for (int c = 0; c < order; ++c)
            {
                // Reduce the exponent first so the phase stays in [0, 2pi).
                const int e = (r * c) % order;
                u(r, c) = std::polar(scale, -2.0 * std::numbers::pi * e / order);
            }
    }
    return {kind, order, std::move(u)};
}

ClassPartition partition(const CodeMatrix &u, int n_md)
{
    if (n_md < 1 || n_md >= u.order)
        throw std::invalid_argument("partition needs 1 <= n_md < N");
    ClassPartition p;
    p.u_md = u.entries.leftCols(n_md);
    p.u_ld = u.entries.rightCols(u.order - n_md);
    for (int c = 0; c < u.order; ++c)
        (c < n_md ? p.md_columns : p.ld_columns).push_back(c);
    return p;
}

OverloadingMatrix build_overloading(UserClass cls, int n_c, int k_c, OverloadingGeneration generation,
                                    std::uint64_t seed)
{
    if (n_c < 1 || k_c < 1)
        throw std::invalid_argument("overloading matrix needs n_c >= 1 and k_c >= 1");

    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n_c, k_c);
    if (generation == OverloadingGeneration::Identity)
    {
        if (k_c > n_c)
            throw std::invalid_argument("identity overloading needs k_c <= n_c");
        for (int k = 0; k < k_c; ++k)
            w(k, k) = 1.0;
    }
    else
    {
        Rng rng(seed);
        ComplexGaussian cn;
        for (int k = 0; k < k_c; ++k)
        {
            for (int r = 0; r < n_c; ++r)
                w(r, k) = cn(rng);
            w.col(k) /= w.col(k).norm();
        }
    }
    return {cls, std::move(w), generation, seed};
}

Eigen::VectorXcd signature_of(const ClassPartition &part, const OverloadingMatrix &w, int sequence)
{
    const auto &basis = part.basis(w.user_class);
    if (basis.cols() != w.w.rows())
        throw std::invalid_argument("overloading matrix rows do not match the class basis width");
    if (sequence < 0 || sequence >= w.w.cols())
        throw std::out_of_range("overloading sequence index out of range");
    return basis * w.w.col(sequence);
}

SignatureSet make_signatures(const ClassPartition &part, const OverloadingMatrix &w_md, const OverloadingMatrix &w_ld)
{
    if (w_md.user_class != UserClass::MD || w_ld.user_class != UserClass::LD)
        throw std::invalid_argument("overloading matrices passed in the wrong class order");
    SignatureSet s;
    for (const auto *w : {&w_md, &w_ld})
        for (int k = 0; k < w->w.cols(); ++k)
        {
            s.signatures.push_back(signature_of(part, *w, k));
            s.classes.push_back(w->user_class);
            s.sequence_index.push_back(k);
        }
    return s;
}

Eigen::MatrixXcd gram(const SignatureSet &sig)
{
    const auto k = static_cast<Eigen::Index>(sig.size());
    if (k == 0)
        return {};
    Eigen::MatrixXcd s(sig.signatures.front().size(), k);
    for (Eigen::Index i = 0; i < k; ++i)
        s.col(i) = sig.signatures[static_cast<std::size_t>(i)];
    return s.adjoint() * s;
}

int numerical_rank(const Eigen::MatrixXcd &m, double tol)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto &sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol)
            ++rank;
    return rank;
}

} // namespace moma
