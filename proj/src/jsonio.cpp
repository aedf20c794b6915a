#include "holofourier/jsonio.hpp"

#include "holofourier/version.hpp"

#include <cstdio>
#include <ostream>

namespace hf {

namespace {

json cplx_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw input_error("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json mat_to_json(const MatX& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cplx_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatX mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw input_error("expected a matrix (array of rows)");
    Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    MatX m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = cplx_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    return m;
}

/// Fixed %.17g formatting for CSV cells (deterministic, round-trippable).
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string weights_str(const IrrepLabel& l) {
    std::string s;
    for (std::size_t i = 0; i < l.weights.size(); ++i)
        s += (i ? " " : "") + std::to_string(l.weights[i]);
    return s;
}

}  // namespace

json to_json(const GroupSpec& spec) {
    json factors = json::array();
    for (FactorKind k : spec.factors())
        factors.push_back(k == FactorKind::Torus ? "torus" : "sl2");
    return json{{"factors", factors}};
}

GroupSpec spec_from_json(const json& j) {
    if (!j.contains("factors")) throw input_error("group spec: missing 'factors'");
    std::vector<FactorKind> factors;
    for (const auto& f : j.at("factors")) {
        std::string s = f.get<std::string>();
        if (s == "torus")
            factors.push_back(FactorKind::Torus);
        else if (s == "sl2")
            factors.push_back(FactorKind::SL2);
        else
            throw input_error("group spec: unknown factor kind '" + s + "'");
    }
    return GroupSpec(std::move(factors));
}

json to_json(const GroupElement& g) {
    json coords = json::array();
    const auto& factors = g.spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f] == FactorKind::Torus) {
            coords.push_back(json{{"z", cplx_to_json(g.z(f))}});
        } else {
            const Mat2& m = g.m(f);
            json rows = json::array();
            for (int r = 0; r < 2; ++r) {
                json row = json::array();
                for (int c = 0; c < 2; ++c) row.push_back(cplx_to_json(m(r, c)));
                rows.push_back(std::move(row));
            }
            coords.push_back(json{{"m", rows}});
        }
    }
    return json{{"coords", coords}};
}

GroupElement element_from_json(const GroupSpec& spec, const json& j) {
    const auto& coords = j.at("coords");
    if (coords.size() != spec.n_factors())
        throw input_error("element: coordinate count does not match spec");
    std::vector<cplx> torus;
    std::vector<Mat2> sl2;
    const auto& factors = spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const json& c = coords[f];
        if (factors[f] == FactorKind::Torus) {
            if (!c.contains("z")) throw input_error("element: torus factor needs 'z'");
            torus.push_back(cplx_from_json(c.at("z")));
        } else {
            if (!c.contains("m")) throw input_error("element: SL2 factor needs 'm'");
            const json& rows = c.at("m");
            Mat2 m;
            for (int r = 0; r < 2; ++r)
                for (int cc = 0; cc < 2; ++cc)
                    m(r, cc) = cplx_from_json(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)]);
            sl2.push_back(m);
        }
    }
    return make_element(spec, std::move(torus), std::move(sl2));
}

json to_json(const IrrepLabel& label) { return json{{"weights", label.weights}}; }

IrrepLabel label_from_json(const json& j) {
    IrrepLabel l;
    l.weights = j.at("weights").get<std::vector<int>>();
    return l;
}

json to_json(const MeasureSpec& m) {
    switch (m.kind) {
        case MeasureSpec::Kind::GaussianRadial:
            return json{{"kind", "gaussian"}, {"tau", m.tau}};
        case MeasureSpec::Kind::ShellStep: {
            // Shell constants are stored in log form (they underflow doubles
            // quickly); "a" carries the exp values for readability.
            std::vector<double> a;
            for (double la : m.log_a) a.push_back(std::exp(la));
            return json{{"kind", "shellstep"},
                        {"h", m.shell_width},
                        {"log_a", m.log_a},
                        {"ext_decay", m.ext_decay},
                        {"a", a}};
        }
        case MeasureSpec::Kind::KAveraged:
            if (!m.base) throw input_error("kavg measure without a base");
            return json{{"kind", "kavg"}, {"base", to_json(*m.base)}, {"resolution", m.k_resolution}};
        case MeasureSpec::Kind::Custom:
            throw input_error("custom densities are not serializable");
    }
    throw input_error("unknown measure kind");
}

MeasureSpec measure_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") {
        MeasureSpec m;
        m.kind = MeasureSpec::Kind::GaussianRadial;
        m.tau = j.at("tau").get<std::vector<double>>();
        for (double t : m.tau)
            if (!(t > 0)) throw input_error("gaussian measure: tau must be > 0");
        return m;
    }
    if (kind == "shellstep") {
        MeasureSpec m;
        m.kind = MeasureSpec::Kind::ShellStep;
        m.shell_width = j.at("h").get<double>();
        if (j.contains("log_a")) {
            m.log_a = j.at("log_a").get<std::vector<double>>();
        } else {
            for (double a : j.at("a").get<std::vector<double>>()) {
                if (!(a > 0)) throw input_error("shellstep: constants must be > 0");
                m.log_a.push_back(std::log(a));
            }
        }
        if (m.log_a.empty()) throw input_error("shellstep: no shell constants");
        for (std::size_t i = 1; i < m.log_a.size(); ++i)
            if (m.log_a[i] > m.log_a[i - 1] + 1e-12)
                throw input_error("shellstep: constants must be nonincreasing");
        m.ext_decay = j.value("ext_decay", 0.0);
        if (m.ext_decay > 0) throw input_error("shellstep: ext_decay must be <= 0");
        return m;
    }
    if (kind == "kavg") {
        MeasureSpec m;
        m.kind = MeasureSpec::Kind::KAveraged;
        m.base = std::make_shared<const MeasureSpec>(measure_from_json(j.at("base")));
        m.k_resolution = j.value("resolution", 8);
        return m;
    }
    throw input_error("unknown measure kind '" + kind + "'");
}

json to_json(const InvariantOperator& op) {
    json terms = json::array();
    for (const auto& t : op.terms)
        terms.push_back(json{{"c", cplx_to_json(t.coeff)}, {"mono", t.monomial}});
    return json{{"side", op.side == InvariantOperator::Side::Left ? "left" : "right"},
                {"terms", terms}};
}

InvariantOperator operator_from_json(const json& j) {
    InvariantOperator op;
    std::string side = j.at("side").get<std::string>();
    if (side == "left")
        op.side = InvariantOperator::Side::Left;
    else if (side == "right")
        op.side = InvariantOperator::Side::Right;
    else
        throw input_error("operator: side must be 'left' or 'right'");
    for (const auto& t : j.at("terms")) {
        InvariantOperator::Term term;
        term.coeff = cplx_from_json(t.at("c"));
        term.monomial = t.at("mono").get<std::vector<int>>();
        op.terms.push_back(std::move(term));
    }
    return op;
}

json fourier_to_json(const FourierData& F, const std::string& hash) {
    json entries = json::array();
    for (const auto& e : F.entries) {
        entries.push_back(json{{"weights", e.label.weights},
                               {"d", e.fhat.rows()},
                               {"C", e.norm_constant},
                               {"tail_estimate", e.tail_estimate},
                               {"matrix", mat_to_json(e.fhat)}});
    }
    return json{{"tool_version", kVersion},
                {"config_hash", hash},
                {"group", to_json(F.spec)},
                {"measure", to_json(F.measure)},
                {"cutoff", F.cutoff},
                {"series_tail_estimate", F.series_tail_estimate},
                {"grid_tail_estimate", F.grid_tail_estimate},
                {"entries", entries}};
}

FourierData fourier_from_json(const json& j) {
    FourierData F;
    F.spec = spec_from_json(j.at("group"));
    F.measure = measure_from_json(j.at("measure"));
    F.cutoff = j.at("cutoff").get<int>();
    F.series_tail_estimate = j.value("series_tail_estimate", 0.0);
    F.grid_tail_estimate = j.value("grid_tail_estimate", 0.0);
    for (const auto& e : j.at("entries")) {
        FourierData::Entry entry;
        entry.label.weights = e.at("weights").get<std::vector<int>>();
        entry.norm_constant = e.at("C").get<double>();
        entry.tail_estimate = e.value("tail_estimate", 0.0);
        entry.fhat = mat_from_json(e.at("matrix"));
        F.entries.push_back(std::move(entry));
    }
    return F;
}

json class_expansion_to_json(const ClassExpansion& ce, const std::string& hash) {
    json entries = json::array();
    for (const auto& e : ce.entries)
        entries.push_back(json{{"weights", e.label.weights}, {"a", cplx_to_json(e.a)}});
    return json{{"tool_version", kVersion},
                {"config_hash", hash},
                {"group", to_json(ce.spec)},
                {"cutoff", ce.cutoff},
                {"class_residual", ce.class_residual},
                {"reconstruction_residual", ce.reconstruction_residual},
                {"entries", entries}};
}

json admissibility_to_json(const AdmissibilityReport& rep, const std::string& hash) {
    json labels = json::array();
    for (const auto& v : rep.labels) {
        labels.push_back(json{{"weights", v.label.weights},
                              {"finite", v.finite},
                              {"C", v.C},
                              {"tail_estimate", v.tail_estimate},
                              {"note", v.note}});
    }
    return json{{"tool_version", kVersion},
                {"config_hash", hash},
                {"pass", rep.pass},
                {"bi_invariance_residual", rep.bi_invariance_residual},
                {"note", rep.note},
                {"labels", labels}};
}

void normalization_csv(std::ostream& os, const NormalizationTable& table) {
    os << "label,weights,C,method,tail_estimate\n";
    auto rows = table.snapshot();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << i << "," << weights_str(rows[i].first) << "," << num(rows[i].second.value) << ","
           << rows[i].second.method << "," << num(rows[i].second.tail_estimate) << "\n";
    }
}

void decay_csv(std::ostream& os, const FourierData& F) {
    os << "weights,d,frobenius_norm,C,tail_estimate\n";
    for (const auto& e : F.entries) {
        os << weights_str(e.label) << "," << e.fhat.rows() << "," << num(e.fhat.norm()) << ","
           << num(e.norm_constant) << "," << num(e.tail_estimate) << "\n";
    }
}

std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

json error_json(const Error& e) {
    return json{{"error",
                 json{{"kind", e.kind() == Error::Kind::Input ? "input" : "numeric"},
                      {"message", e.what()}}}};
}

}  // namespace hf
