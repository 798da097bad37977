#pragma once

#include <string>

#include "json.hpp"
#include "kh/diagram.hpp"
#include "kh/homology.hpp"
#include "kh/spectral.hpp"
#include "kh/thin.hpp"

namespace kh {

using nlohmann::json;

json to_json(const BigradedGroup& z);
json to_json(const FieldTable& t);
json to_json(const LaurentPoly& p);
json to_json(const SpectralPage& pg);
json to_json(const SpectralSequence& seq);
json to_json(const DiagonalProfile& prof);
json to_json(const ThinRegion& r);
json to_json(const HypothesisReport& rep);
json to_json(const PlanarDiagram& d);
json to_json(const CheckReport& rep);

// pretty grid like the published tables: rows are j, columns i, entries
// "Z^2+Z_2" (integral) or plain dimensions (field)
std::string table_text(const BigradedGroup& z);
std::string table_text(const FieldTable& t);

std::string csv_text(const BigradedGroup& z);
std::string csv_text(const FieldTable& t);

}  // namespace kh
