#pragma once

// Curve models, validity checks and the reduced-form parameter boxes.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssp/field.hpp"
#include "ssp/form.hpp"
#include "ssp/poly.hpp"

namespace ssp {

enum class QType { N1, N2, Dege };
enum class TriCase { SplitNode, NonSplitNode, Cusp };

enum class Reject { inseparable, reducible, wrong_singularity, not_howe_type, degenerate_discriminant };

const char* to_string(QType t);
const char* to_string(TriCase t);
const char* to_string(Reject r);

struct EllipticModel {
    Fe A, B;
};

struct HyperModel {
    Fe c;
    Poly f;
    int g = 0;
};

struct CanonicalModel {
    QType qtype;
    Form P;
    Form Q() const;
};

struct TrigonalModel {
    TriCase tcase;
    Form F;
};

struct HoweModel {
    Fe A1, B1, A2, B2, lambda, mu, nu;
    Poly f1() const;  // x^3 + A1 mu^2 x + B1 mu^3
    Poly f2() const;  // (x - lambda)^3 + A2 nu^2 (x - lambda) + B2 nu^3
};

using CurveModel = std::variant<EllipticModel, HyperModel, CanonicalModel, TrigonalModel, HoweModel>;

// least non-square of F in code order (eps itself for prime fields)
Fe field_nonsquare(const Field& F);

// quadric of the given type over F (eps taken from field_nonsquare for N2)
Form quadric(const Field& F, QType t);

// remainder of P modulo the principal ideal (Q), free of xw (yw for Dege)
Form reduce_mod_quadric(const Form& P, QType t);

std::optional<Reject> check_elliptic(const EllipticModel& m);
std::optional<Reject> check_hyper(const HyperModel& m);
std::optional<Reject> check_canonical(const CanonicalModel& m);
std::optional<Reject> check_trigonal(const TrigonalModel& m);
std::optional<Reject> check_howe(const HoweModel& m);

// validate eagerly; throws invalid-model with the reason
CurveModel mk_model(CurveModel m);

// --- smoothness and singularities

bool is_smooth_ci_g4(const CanonicalModel& m);

enum class SingVerdict { valid_unique_singularity, extra_singularity, wrong_type };
const char* to_string(SingVerdict v);
SingVerdict quintic_singularities(const TrigonalModel& m);

// local type of a plane quintic at (0:0:1), assuming it is singular there
std::optional<TriCase> node_type_at_origin(const Form& F);

// --- parameter boxes

// A slot holds the allowed values of one parameter group; tuples of a slot are
// enumerated in the stored order, slot 0 is most significant.
struct Slot {
    std::string name;
    std::vector<std::vector<Fe>> values;
};

struct FilterCounts {
    u64 yielded = 0;
    u64 filtered = 0;
    std::map<std::string, u64> by_reason;
    FilterCounts& operator+=(const FilterCounts& o);
};

struct ModelBox {
    std::string name;
    const Field* K = nullptr;
    std::vector<Slot> slots;
    std::function<CurveModel(const std::vector<Fe>&)> build;  // unvalidated model

    u64 size() const;
    std::vector<Fe> params(u64 idx) const;  // concatenated slot tuples
    CurveModel at(u64 idx) const { return build(params(idx)); }
    // visit validated models with index in [start, end)
    FilterCounts for_each(u64 start, u64 end, const std::function<void(u64, const CurveModel&)>& fn) const;
};

ModelBox gen_hyper_reduced(int g, const Field& K);
std::vector<ModelBox> gen_canonical_reduced(const Field& K);
std::vector<ModelBox> gen_trigonal_reduced(const Field& K);

// b values for the non-split node form with z^2 term; three when q = -1 mod 3
std::vector<Fe> nonsplit_b_values(const Field& K);

// --- feasibility bounds

bool ekedahl_feasible(int g, u64 p, bool hyperelliptic);
bool ft_maximal_feasible(int g, u64 p);

// --- serialization helpers

std::vector<std::string> serialize(const CurveModel& m);
std::string family_tag(const CurveModel& m);
// inverse of serialize for the given family tag, coefficients read in K
CurveModel deserialize(const std::string& tag, const std::vector<std::string>& fields, const Field& K);

}  // namespace ssp
