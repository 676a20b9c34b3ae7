#pragma once

// Homogeneous forms in 3 or 4 variables with sparse storage, plus dense
// ranked buffers for powers.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssp/field.hpp"
#include "ssp/poly.hpp"

namespace ssp {

using Mono = std::array<std::uint8_t, 4>;

inline int mono_deg(const Mono& m) { return m[0] + m[1] + m[2] + m[3]; }

class Form {
public:
    Form() = default;
    Form(const Field& F, int nvars, int degree);

    // terms given as (exponents, integer coefficient)
    static Form from_terms(const Field& F, int nvars, const std::vector<std::pair<Mono, i64>>& terms);

    const Field& field() const { return *F_; }
    int nvars() const { return n_; }
    int degree() const { return d_; }
    const std::map<Mono, Fe>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add_term(const Mono& m, const Fe& c);
    Fe coeff(const Mono& m) const;

    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form operator*(const Form& o) const;
    Form operator*(const Fe& s) const;
    bool operator==(const Form& o) const;
    bool operator!=(const Form& o) const { return !(*this == o); }

    // substitute x_i -> sum_j M[i][j] x_j  (i.e. F(M v))
    Form subst(const std::vector<std::vector<Fe>>& M) const;
    Fe eval(const std::vector<Fe>& v) const;
    Form partial(int i) const;
    Form map_to(const Field& G) const;

    std::string str() const;

private:
    const Field* F_ = nullptr;
    int n_ = 0;
    int d_ = 0;
    std::map<Mono, Fe> t_;
};

// Dense indexing of the monomials of degree d in n variables (lex order).
class MonoIndex {
public:
    static const MonoIndex& get(int n, int d);
    int n() const { return n_; }
    int d() const { return d_; }
    size_t size() const { return monos_.size(); }
    const Mono& mono(size_t i) const { return monos_[i]; }
    const std::vector<Mono>& monos() const { return monos_; }
    std::uint32_t rank(const Mono& m) const;

    MonoIndex(int n, int d);

private:
    int n_, d_;
    std::vector<Mono> monos_;
    std::vector<std::uint32_t> table_;  // over (e0, e1, e2) in base d+1
};

struct FormTargeted {
    bool aborted = false;
    size_t abort_at = 0;
    std::vector<Fe> values;
};

std::vector<Fe> form_pow_dense(const Form& F, u64 m);  // all coefficients of F^m
FormTargeted form_pow_targeted(const Form& F, u64 m, const std::vector<Mono>& targets, bool early_abort);

}  // namespace ssp
