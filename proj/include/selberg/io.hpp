// File formats: generator sets (JSON), spectra (JSON or CSV), and the report
// writers. Reports carry a deterministic "payload" object (config + results)
// and a separate "meta" object for timestamps.
#pragma once

#include "selberg/bsdiag.hpp"
#include "selberg/counting.hpp"
#include "selberg/traceformula.hpp"

#include <string>
#include <vector>

// vendored single-header nlohmann/json
#include "json.hpp"

namespace selberg {

using Json = nlohmann::json;

struct GeneratorFile {
    std::vector<Mobius> generators;
    int genus = 2;
};

GeneratorFile load_generators(const std::string& path);
void save_generators(const GeneratorFile& gf, const std::string& path);

struct SpectrumFile {
    std::vector<double> eigenvalues;  // sorted
    double lambda_cut = 0.0;
    std::string surface_id;
    std::string source;
};

SpectrumFile load_spectrum(const std::string& path);  // .json or .csv by extension
void save_spectrum(const SpectrumFile& sf, const std::string& path);

// report payloads (deterministic given config + seed)
Json to_json(const TruncationCertificate& c);
Json to_json(const GeometricTerm& g, bool include_samples = false);
Json to_json(const TraceReport& r);
Json to_json(const ThinPartEstimate& t);
Json to_json(const AssumptionReport& r);
Json to_json(const CheckRow& row);
Json to_json(const SpectrumCheckReport& rep);

// wraps a payload with a meta block and writes it; payload bytes are the
// reproducibility surface, meta holds the timestamp
void write_report(const Json& config, const Json& results, const std::string& path);
std::string payload_bytes(const Json& config, const Json& results);

// lossy CSV projections
void write_csv_rows(const std::vector<CheckRow>& rows, const std::string& path);
void write_csv_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, const std::string& path);

}  // namespace selberg
