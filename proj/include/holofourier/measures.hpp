#pragma once

#include "holofourier/expr.hpp"
#include "holofourier/group.hpp"
#include "holofourier/irreps.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace hf {

/// Tame measure dmu(g) = rho(g) dg against the documented Haar convention
/// (torus: ds dtheta in z = e^(s+i theta); SL2: sinh^2(2s) ds with both
/// compact factors carrying normalized mass 1).
///
/// Densities are handled in log form throughout: the staircase construction
/// drives shell constants below the double-precision underflow threshold as
/// soon as the function family grows quickly.
struct MeasureSpec {
    enum class Kind { GaussianRadial, ShellStep, KAveraged, Custom };
    Kind kind = Kind::GaussianRadial;

    // GaussianRadial: rho(s) = prod_f exp(-s_f^2 / tau_f)
    std::vector<double> tau;

    // ShellStep: rho(g) = a_n on shell n = ceil(total_radial / h); log_a holds
    // shells 1..horizon, extended beyond by the fixed per-shell decrement.
    double shell_width = 1.0;
    std::vector<double> log_a;
    double ext_decay = 0.0;

    // KAveraged: base measure plus the K x K quadrature resolution that was
    // used to average (or verify) it.
    std::shared_ptr<const MeasureSpec> base;
    int k_resolution = 0;

    // Custom densities (tests, k_average input); not serializable.
    std::function<double(const GroupElement&)> custom_log_density;
    std::function<double(const std::vector<double>&)> custom_radial_log_density;

    bool is_radial() const;
    double log_density(const GroupElement& g) const;
    double log_density_radial(const std::vector<double>& radial) const;
    /// 1-based shell index of a total radius (ShellStep).
    int shell_index(double total_radial) const;
    double shell_log_a(int n) const;
};

MeasureSpec gaussian_radial(const GroupSpec& spec, double tau);
MeasureSpec gaussian_radial(const GroupSpec& spec, std::vector<double> tau);

/// Staircase construction data, reported by build_tame_measure.
struct ShellBuildInfo {
    double shell_width = 1.0;
    int horizon = 0;
    std::vector<double> log_m;    // log M_n, n = 1..2*horizon
    std::vector<double> log_vol;  // log |K_n \ K_{n-1}|, n = 1..horizon
    std::vector<double> log_a;    // log a_n, n = 1..horizon
    double ext_decay = 0.0;
    std::string grid_note;
};

struct ShellBuildCfg {
    double shell_width = 1.0;
    int angular = 8;        // torus angular / SU(2) Euler resolution for the M grids
    int radial_per_unit = 4;
};

/// Staircase measure: shells K_n = {total radial <= n h}, grid-estimated
/// maxima M_n of |f_k|^2 (k <= n), and a_n = min(a_{n-1}, 2^-n / (M_2n vol_n)).
/// Beyond the horizon the constants continue with the last observed
/// per-shell decrement of the same recurrence.
MeasureSpec build_tame_measure(const GroupSpec& spec, const std::vector<HoloFn>& family,
                               int horizon, const ShellBuildCfg& cfg = {},
                               ShellBuildInfo* info = nullptr);

/// K x K average of a density. For a radial base the averaging is the
/// identity; this is verified at sample points (throws numeric_error if the
/// verification fails) and the base density is then reused directly. For a
/// non-radial base the returned density performs the double quadrature.
MeasureSpec k_average(const GroupSpec& spec, const MeasureSpec& base, int k_resolution);

struct NormalizationEntry {
    double value = 0;
    std::string method;  // "closed-form" | "radial-1d" | "quadrature"
    double tail_estimate = 0;
};

/// C_{pi,mu}: integral of the squared Frobenius norm of the representation.
/// Radial densities reduce to 1-D integrals per factor (Frobenius norm is
/// bi-unitarily invariant); throws numeric_error when the truncated-tail
/// estimate reveals a divergent integral.
NormalizationEntry normalization(const GroupSpec& spec, const MeasureSpec& measure,
                                 const IrrepLabel& label);

/// Total mass of the measure (the trivial-representation normalization).
double total_mass(const GroupSpec& spec, const MeasureSpec& measure);

/// Cache of normalization constants; concurrent readers, serialized writes.
class NormalizationTable {
public:
    NormalizationTable(GroupSpec spec, MeasureSpec measure)
        : spec_(std::move(spec)), measure_(std::move(measure)) {}

    const GroupSpec& spec() const { return spec_; }
    const MeasureSpec& measure() const { return measure_; }

    NormalizationEntry get(const IrrepLabel& label) const;
    std::vector<std::pair<IrrepLabel, NormalizationEntry>> snapshot() const;

private:
    GroupSpec spec_;
    MeasureSpec measure_;
    mutable std::mutex mu_;
    mutable std::map<IrrepLabel, NormalizationEntry> cache_;
};

struct AdmissibilityReport {
    bool pass = false;
    double bi_invariance_residual = 0;  // max |log rho(k1 g k2) - log rho(g)|
    struct LabelVerdict {
        IrrepLabel label;
        bool finite = false;
        double C = 0;
        double tail_estimate = 0;
        std::string note;
    };
    std::vector<LabelVerdict> labels;
    std::string note;
};

/// Checks K-bi-invariance on random samples and the finiteness of C up to
/// the cutoff. Failures are report entries, not exceptions.
AdmissibilityReport verify_admissible(const GroupSpec& spec, const MeasureSpec& measure,
                                      int cutoff, double tol, int samples = 64,
                                      std::uint64_t seed = 20240801);

/// Partial L2 mass of |f|^2 against a ShellStep measure plus the tail bound
/// from the staircase inequality; used to certify the Lemma-style bound.
struct ShellL2Report {
    double partial = 0;            // shells up to the horizon
    double tail_bound = 0;         // sum of 2^-n over extended shells
    std::vector<double> shell_terms;  // a_n * max|f|^2 * vol_n per shell
    bool lemma_bound_holds = false;   // shell_terms[n] <= 2^-n for n >= k
};
ShellL2Report shellstep_l2_bound(const GroupSpec& spec, const MeasureSpec& measure,
                                 const HoloFn& f, int member_index,
                                 const ShellBuildCfg& cfg = {});

}  // namespace hf
