#include "selberg/io.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace selberg {

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

}  // namespace

GeneratorFile load_generators(const std::string& path) {
    Json j = read_json_file(path);
    GeneratorFile gf;
    if (!j.contains("genus") || !j.contains("generators"))
        throw InputError("generator file needs {\"genus\": k, \"generators\": [...]}");
    gf.genus = j["genus"].get<int>();
    for (const auto& m : j["generators"]) {
        if (!m.is_array() || m.size() != 4)
            throw InputError("each generator is a row-major [a, b, c, d]");
        // values are renormalized to unit determinant by the constructor
        gf.generators.emplace_back(m[0].get<double>(), m[1].get<double>(),
                                   m[2].get<double>(), m[3].get<double>());
    }
    if (gf.generators.empty()) throw InputError("generator list is empty");
    return gf;
}

void save_generators(const GeneratorFile& gf, const std::string& path) {
    Json j;
    j["genus"] = gf.genus;
    j["generators"] = Json::array();
    for (const Mobius& m : gf.generators)
        j["generators"].push_back({m.a(), m.b(), m.c(), m.d()});
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

SpectrumFile load_spectrum(const std::string& path) {
    SpectrumFile sf;
    if (ends_with(path, ".json")) {
        Json j = read_json_file(path);
        if (!j.contains("eigenvalues")) throw InputError("spectrum file lacks \"eigenvalues\"");
        sf.eigenvalues = j["eigenvalues"].get<std::vector<double>>();
        sf.lambda_cut = j.value("lambda_cut", 0.0);
        sf.surface_id = j.value("surface", std::string{});
        sf.source = j.value("source", std::string{});
    } else {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line[0] == '#') {
                std::istringstream hs(line.substr(1));
                std::string key;
                if (hs >> key) {
                    if (key == "lambda_cut:") hs >> sf.lambda_cut;
                    else if (key == "surface:") hs >> sf.surface_id;
                    else if (key == "source:") hs >> sf.source;
                }
                continue;
            }
            try {
                sf.eigenvalues.push_back(std::stod(line));
            } catch (...) {
                throw InputError("bad spectrum line: " + line);
            }
        }
    }
    if (sf.eigenvalues.empty()) throw InputError("spectrum is empty");
    for (std::size_t i = 0; i + 1 < sf.eigenvalues.size(); ++i)
        if (sf.eigenvalues[i + 1] < sf.eigenvalues[i] - 1e-12)
            throw InputError("spectrum must be sorted");
    if (sf.lambda_cut <= 0.0) sf.lambda_cut = sf.eigenvalues.back();
    return sf;
}

void save_spectrum(const SpectrumFile& sf, const std::string& path) {
    if (ends_with(path, ".json")) {
        Json j;
        j["surface"] = sf.surface_id;
        j["lambda_cut"] = sf.lambda_cut;
        j["source"] = sf.source;
        j["eigenvalues"] = sf.eigenvalues;
        std::ofstream out(path);
        out << j.dump(2) << "\n";
    } else {
        std::ofstream out(path);
        out << "# surface: " << sf.surface_id << "\n";
        out << "# lambda_cut: " << sf.lambda_cut << "\n";
        out << "# source: " << sf.source << "\n";
        out.precision(17);
        for (double v : sf.eigenvalues) out << v << "\n";
    }
}

Json to_json(const TruncationCertificate& c) {
    return Json{{"r_trunc", c.r_trunc},
                {"tail_abs", c.tail_abs},
                {"tail_rel", c.tail_rel},
                {"fitted_kernel_c", c.fitted_kernel_c},
                {"counting_r", c.counting_r},
                {"met_target", c.met_target}};
}

Json to_json(const GeometricTerm& g, bool include_samples) {
    Json j{{"estimate", g.estimate},
           {"sigma", g.sigma},
           {"n", g.n},
           {"L", g.L},
           {"rk_plus", g.rk_plus},
           {"rk_minus", g.rk_minus},
           {"sigma_plus", g.sigma_plus},
           {"sigma_minus", g.sigma_minus},
           {"n_thin", g.n_thin},
           {"thin_certified_empty", g.thin_certified_empty},
           {"domain_volume_estimate", g.domain_volume_estimate},
           {"certificate", to_json(g.cert)}};
    if (include_samples) j["per_sample"] = g.per_sample;
    return j;
}

Json to_json(const TraceReport& r) {
    Json j{{"surface", r.surface_id},
           {"family", r.family == Family::B ? "B" : "H"},
           {"window", {r.window_a, r.window_b}},
           {"t", r.t},
           {"volume", r.volume},
           {"main_term", r.main_term},
           {"integral_remainder", r.integral_remainder},
           {"integral_remainder_err", r.integral_remainder_err},
           {"integral_envelope", r.integral_envelope},
           {"integral_envelope_kind", r.integral_envelope_kind},
           {"geometric", to_json(r.geometric)},
           {"primitive_overcount_flag", r.primitive_overcount_flag}};
    if (r.spectral_sum) {
        j["spectral_sum"] = *r.spectral_sum;
        j["spectral_truncation_bound"] = r.spectral_truncation_bound;
        j["spectral_tail_bound"] = r.spectral_tail_bound;
    }
    if (r.residual) j["residual"] = *r.residual;
    return j;
}

Json to_json(const ThinPartEstimate& t) {
    return Json{{"L", t.L},
                {"volume", t.volume},
                {"sigma", t.sigma},
                {"n", t.n},
                {"n_thin", t.n_thin},
                {"relative", t.relative},
                {"certified_zero", t.certified_zero}};
}

Json to_json(const AssumptionReport& r) {
    return Json{{"g_proxy", r.g_proxy},
                {"injrad_threshold", r.injrad_threshold},
                {"injrad_measured", r.injrad_measured},
                {"injrad_pass", r.injrad_pass},
                {"L", r.L},
                {"thin_available", r.thin_available},
                {"thin_fraction", r.thin_fraction},
                {"thin_sigma", r.thin_sigma},
                {"bs_threshold", r.bs_threshold},
                {"bs_pass", r.bs_pass},
                {"label", "assumption check"}};
}

Json to_json(const CheckRow& row) {
    return Json{{"kind", row.kind},     {"p1", row.p1},
                {"p2", row.p2},         {"observed", row.observed},
                {"bound_lo", row.bound_lo}, {"bound_hi", row.bound_hi},
                {"pass", row.pass}};
}

Json to_json(const SpectrumCheckReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) rows.push_back(to_json(r));
    return Json{{"g", rep.g},
                {"C_upper", rep.constants.upper},
                {"C_equiv", rep.constants.equiv},
                {"C_mult", rep.constants.mult},
                {"C_jth", rep.constants.jth},
                {"failures", rep.failures},
                {"genus_warning", rep.genus_warning},
                {"rows", rows}};
}

std::string payload_bytes(const Json& config, const Json& results) {
    Json payload{{"config", config}, {"results", results}};
    return payload.dump(2);
}

void write_report(const Json& config, const Json& results, const std::string& path) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    Json j{{"payload", Json{{"config", config}, {"results", results}}},
           {"meta",
            Json{{"unix_time_ms",
                  std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}}}};
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_csv_rows(const std::vector<CheckRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "kind,p1,p2,observed,bound_lo,bound_hi,pass\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.kind << "," << r.p1 << "," << r.p2 << "," << r.observed << "," << r.bound_lo
            << "," << r.bound_hi << "," << (r.pass ? 1 : 0) << "\n";
}

void write_csv_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    out.precision(17);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

}  // namespace selberg
