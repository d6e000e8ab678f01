#pragma once

#include <json.hpp>

#include "nasp/motivic.hpp"
#include "nasp/stationary.hpp"

namespace nasp {

using Json = nlohmann::ordered_json;

Json cyclo_to_json(const CycloNum& v);
Json step_to_json(const StepFunction& f);
Json morse_to_json(const MorseData& md);
Json certificate_to_json(const PhaseCertificate& cert);
Json verify_record_to_json(const VerifyRecord& r);
Json uniform_formula_to_json(const UniformFormula& uf);
Json uniform_report_to_json(const UniformPrimeReport& r);
Json double_fourier_to_json(const DoubleFourierReport& r);

/// Prime-independent step-function/region descriptions:
/// {"n": 2, "cells": [{"center": ["1/2", "0"], "depth": 1, "value": "3/4"}]}
/// {"n": 2, "cosets": [{"center": ["0", "0"], "depth": 0}]}
StepSpec step_spec_from_json(const Json& j);
RegionSpec region_spec_from_json(const Json& j);

mpq_class mpq_from_string(const std::string& s);

} // namespace nasp
