#ifndef SPARSESPEC_JSON_IO_HPP
#define SPARSESPEC_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "sparsespec/extension.hpp"
#include "sparsespec/riesz.hpp"
#include "sparsespec/spectrum.hpp"
#include "sparsespec/torus.hpp"

namespace sparsespec {

using json = nlohmann::json;

json to_json(const SpectralVector& v);
SpectralVector spectral_from_json(const json& j);

json to_json(const SampledFunction& f);
SampledFunction sampled_from_json(const json& j);

json to_json(const CertificateResult& c);

json to_json(const CoefficientSequence& a);
CoefficientSequence coefficients_from_json(const json& j);

// {"log2_r": [...]} or {"kind": "affine-log", "slope": s, "offset": o, "k_max"?}
RadiusSequence radii_from_json(const json& j, std::int64_t default_k_max);

// {"w": [...]} or {"kind": "const"|"affine-log", ...}
WeightSequence weights_from_json(const json& j, std::int64_t default_k_max);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace sparsespec

#endif
