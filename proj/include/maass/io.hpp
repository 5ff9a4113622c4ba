#pragma once

#include <string>

#include "maass/spectral.hpp"
#include "maass/traceformula.hpp"

namespace maass {

// Common metadata stamped into every stage artifact; downstream stages verify
// it against their own configuration and name the stage to re-run.
struct ArtifactMeta {
    long level = 0;
    double X = 0;
    int d = 0;
    double bits2 = 0;
    long prec = 0;
    long M = 0;
    long n_max = 0;
    bool compatible_with(const ArtifactMeta& o) const;
};

void atomic_write(const std::string& path, const std::string& content);

std::string package_to_json(const TestFunctionPackage& pkg, const ArtifactMeta& meta);
TestFunctionPackage package_from_json(const std::string& text, ArtifactMeta* meta = nullptr);

std::string traces_to_json(const TraceTable& table, const ArtifactMeta& meta);
TraceTable traces_from_json(const std::string& text, ArtifactMeta* meta = nullptr);

struct CandidateSet {
    int parity = +1;
    long M_effective = 0;
    double lambda_max = 0;
    std::vector<CandidateForm> candidates;
};
std::string candidates_to_json(const CandidateSet& set, const ArtifactMeta& meta);
CandidateSet candidates_from_json(const std::string& text, ArtifactMeta* meta = nullptr);

std::string forms_to_json(const std::vector<VerifiedForm>& forms, const ArtifactMeta& meta);
std::vector<VerifiedForm> forms_from_json(const std::string& text, ArtifactMeta* meta = nullptr);

std::string read_file(const std::string& path);  // throws MissingDataError
bool file_exists(const std::string& path);

}  // namespace maass
