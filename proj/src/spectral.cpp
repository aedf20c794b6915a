#include "holofourier/spectral.hpp"

#include <cmath>

namespace hf {

MatX expm(const MatX& A) {
    const Eigen::Index d = A.rows();
    if (A.cols() != d) throw input_error("expm: matrix must be square");
    double norm = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        double row = 0;
        for (Eigen::Index j = 0; j < d; ++j) row += std::abs(A(i, j));
        norm = std::max(norm, row);
    }
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    MatX B = A / std::pow(2.0, s);
    MatX term = MatX::Identity(d, d);
    MatX sum = MatX::Identity(d, d);
    for (int k = 1; k <= 80; ++k) {
        term = term * B / static_cast<double>(k);
        sum += term;
        if (term.norm() <= 1e-18 * sum.norm()) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

ClassCheck is_class_function(const HoloFn& f, const GroupSpec& spec, int samples, double tol,
                             std::uint64_t seed) {
    if (samples < 1) throw input_error("is_class_function: samples must be >= 1");
    double maxres = 0;
    for (int i = 0; i < samples; ++i) {
        std::uint64_t s = seed + 17u * static_cast<std::uint64_t>(i);
        GroupElement g = sample_element(spec, s, 1.2);
        GroupElement h = sample_element(spec, s + 7, 1.2);
        cplx a = f(multiply(g, h));
        cplx b = f(multiply(h, g));
        maxres = std::max(maxres, std::abs(a - b));
    }
    return {maxres <= tol, maxres};
}

ClassExpansion class_expand(const HoloFn& f, const MeasureSpec& measure, int cutoff,
                            const QuadratureGrid& grid, double class_tol) {
    ClassCheck check = is_class_function(f, grid.spec, 32, class_tol);
    if (!check.pass)
        throw input_error("class_expand: input is not a class function (residual " +
                          std::to_string(check.max_residual) + ")");
    FourierData F = fourier(f, measure, cutoff, grid);
    ClassExpansion out;
    out.spec = grid.spec;
    out.cutoff = cutoff;
    out.class_residual = check.max_residual;
    for (const auto& e : F.entries) {
        double d = static_cast<double>(e.fhat.rows());
        out.entries.push_back({e.label, d * e.fhat.trace()});
    }
    // Reconstruction diagnostic at a few sample points.
    double maxres = 0;
    for (int i = 0; i < 6; ++i) {
        GroupElement g = sample_element(grid.spec, 9100u + static_cast<unsigned>(i), 0.5);
        cplx rec(0, 0);
        for (const auto& e : out.entries) rec += e.a * character(grid.spec, e.label, g);
        maxres = std::max(maxres, std::abs(rec - f(g)));
    }
    out.reconstruction_residual = maxres;
    return out;
}

namespace {

bool finite_mat(const MatX& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

std::string label_str(const IrrepLabel& l) {
    std::string s = "(";
    for (std::size_t i = 0; i < l.weights.size(); ++i)
        s += (i ? "," : "") + std::to_string(l.weights[i]);
    return s + ")";
}

}  // namespace

cplx EvolutionState::eval(std::size_t time_index, const GroupElement& g) const {
    if (time_index >= times.size()) throw input_error("EvolutionState: time index out of range");
    cplx sum(0, 0);
    for (std::size_t li = 0; li < initial.entries.size(); ++li) {
        const auto& e = initial.entries[li];
        double d = static_cast<double>(e.fhat.rows());
        MatX rep = rep_matrix(spec, e.label, g);
        sum += d * d * (propagated[time_index][li] * rep).trace();
    }
    return sum;
}

cplx EvolutionState::eval_at(double t, const GroupElement& g) const {
    cplx sum(0, 0);
    for (std::size_t li = 0; li < initial.entries.size(); ++li) {
        const auto& e = initial.entries[li];
        double d = static_cast<double>(e.fhat.rows());
        MatX P = expm(t * op_matrices[li]) * e.fhat;
        MatX rep = rep_matrix(spec, e.label, g);
        sum += d * d * (P * rep).trace();
    }
    return sum;
}

EvolutionState evolve(const HoloFn& f0, const InvariantOperator& D,
                      const std::vector<double>& times, const MeasureSpec& measure, int cutoff,
                      const QuadratureGrid& grid) {
    if (D.side != InvariantOperator::Side::Left)
        throw input_error(
            "evolve: the solution formula applies to left-invariant operators; "
            "transform right-invariant problems manually");
    EvolutionState st;
    st.spec = grid.spec;
    st.op = D;
    st.times = times;
    st.initial = fourier(f0, measure, cutoff, grid);
    for (const auto& e : st.initial.entries)
        st.op_matrices.push_back(rep_operator(st.spec, e.label, D));
    st.propagated.resize(times.size());
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        double t = times[ti];
        st.propagated[ti].reserve(st.initial.entries.size());
        for (std::size_t li = 0; li < st.initial.entries.size(); ++li) {
            MatX E = expm(t * st.op_matrices[li]);
            if (!finite_mat(E))
                throw numeric_error("evolve: exponential overflow at t=" + std::to_string(t) +
                                    " for label " + label_str(st.initial.entries[li].label));
            st.propagated[ti].push_back(E * st.initial.entries[li].fhat);
        }
    }
    return st;
}

cplx apply_operator_fd(const std::function<cplx(const GroupElement&)>& f, const GroupSpec& spec,
                       const InvariantOperator& D, const GroupElement& g, double h) {
    auto basis = lie_basis(spec);
    bool left = D.side == InvariantOperator::Side::Left;
    // Recursive nested central differences, outermost generator first.
    std::function<cplx(const std::vector<int>&, std::size_t, const GroupElement&)> mono_fd =
        [&](const std::vector<int>& mono, std::size_t pos, const GroupElement& at) -> cplx {
        if (pos == mono.size()) return f(at);
        int idx = mono[pos];
        if (idx < 0 || static_cast<std::size_t>(idx) >= basis.size())
            throw input_error("apply_operator_fd: generator index out of range");
        GroupElement step = exp_lie(basis[static_cast<std::size_t>(idx)], h);
        GroupElement back = exp_lie(basis[static_cast<std::size_t>(idx)], -h);
        GroupElement plus = left ? multiply(at, step) : multiply(step, at);
        GroupElement minus = left ? multiply(at, back) : multiply(back, at);
        return (mono_fd(mono, pos + 1, plus) - mono_fd(mono, pos + 1, minus)) / (2.0 * h);
    };
    cplx sum(0, 0);
    for (const auto& term : D.terms) sum += term.coeff * mono_fd(term.monomial, 0, g);
    return sum;
}

double evolve_check(const EvolutionState& state, double t, const GroupElement& g, double dt,
                    double h) {
    cplx fplus = state.eval_at(t + dt, g);
    cplx fminus = state.eval_at(t - dt, g);
    cplx dfdt = (fplus - fminus) / (2.0 * dt);
    auto ft = [&](const GroupElement& x) { return state.eval_at(t, x); };
    cplx Df = apply_operator_fd(ft, state.spec, state.op, g, h);
    return std::abs(dfdt - Df);
}

}  // namespace hf
