#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "crystalline/comb.hpp"
#include "crystalline/model.hpp"
#include "crystalline/point_set.hpp"
#include "crystalline/reconstruct.hpp"

namespace crystalline::io {

/// Schema violation with the offending field path in the message.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complex numbers are [re, im]; exact rationals are strings "p/q"; integral
// JSON numbers parse as exact, non-integral as double. parse(serialize(x))
// reproduces x including exactness.

std::string serialize(const CrystallineDistribution& d);
CrystallineDistribution parse_distribution(const std::string& text);

std::string serialize(const FiniteOrderComb& g);
FiniteOrderComb parse_comb(const std::string& text);

std::string serialize(const reconstruct::TranslateDecomposition& td);
reconstruct::TranslateDecomposition parse_translate_decomposition(const std::string& text);

std::string serialize(const PointSet& s);
PointSet parse_point_set(const std::string& text);

/// Dispatch on the document shape ("terms" / "atoms" / "sequences" / "points").
enum class DocumentKind { Distribution, Comb, TranslateDecomposition, PointSet };
DocumentKind detect_kind(const std::string& text);

/// CSV: ',' separator, '.' decimal point, one header row, %.15g values.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace crystalline::io
