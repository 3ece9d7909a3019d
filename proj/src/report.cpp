#include "hgogp/report.hpp"

#include <array>
#include <cstdio>

#include <openssl/sha.h>

namespace hgogp {

std::string git_blob_hash(const std::string& content) {
    const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
    std::array<unsigned char, SHA_DIGEST_LENGTH> digest{};
    SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest.data());
    std::string hex;
    hex.reserve(2 * digest.size());
    for (unsigned char b : digest) {
        std::array<char, 3> two{};
        std::snprintf(two.data(), two.size(), "%02x", b);
        hex += two.data();
    }
    return hex;
}

nlohmann::ordered_json bound_report_json(const WindowBound& wb) {
    using ojson = nlohmann::ordered_json;
    const BoundReport& r = wb.report;
    ojson j;
    j["window"] = ojson{{"start", wb.window_start},
                        {"end", wb.window_end},
                        {"samples", r.posterior().size()},
                        {"tube_centers", wb.tube_centers}};
    j["rho"] = r.rho;
    j["covering_number"] = r.covering;
    j["beta"] = r.beta;
    j["alpha"] = r.alpha;
    j["confidence"] = r.confidence;
    j["lipschitz_kernel"] = r.lipschitz_kernel;
    j["kernel_max"] = r.kernel_max;
    j["lipschitz_target"] = r.lipschitz_target;
    j["lipschitz_mean"] = r.lipschitz_mean;
    j["lipschitz_variance"] = r.lipschitz_variance;
    j["gap"] = r.gap ? ojson(*r.gap) : ojson(kGapUnavailable);
    j["envelope"] = "sqrt(beta) * sigma(x) + alpha + gap";
    j["coverage"] = ojson{{"query_points", wb.coverage.query_points},
                          {"covered_points", wb.coverage.covered_points},
                          {"max_error", wb.coverage.max_error},
                          {"min_margin", wb.coverage.min_margin},
                          {"all_covered", wb.coverage.all_covered()}};
    return j;
}

nlohmann::ordered_json summary_json(const TraceSummary& s) {
    return nlohmann::ordered_json{{"mean_err_h1", s.mean_err_h1},
                                  {"mean_err_baseline", s.mean_err_baseline},
                                  {"mean_err_observer", s.mean_err_observer},
                                  {"post_transient_steps", s.post_transient_steps},
                                  {"accepted_samples", s.accepted_samples}};
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
    return nlohmann::ordered_json{{"tool_version", m.tool_version},
                                  {"config_path", m.config_path.string()},
                                  {"output_directory", m.output_directory.string()},
                                  {"seeds", m.seeds},
                                  {"seed", m.seed},
                                  {"config_hash", m.config_hash},
                                  {"effective_config", m.effective_config}};
}

}  // namespace hgogp
