#pragma once

#include <string>
#include <utility>
#include <vector>

// Deterministic number formatting shared by the sweep CSV writer and the
// command-line tool.  Structured outputs carry 17 significant digits (enough
// to round-trip a double bit-exactly); human-readable output carries 6.

namespace qtd::fmt {

/// %.17g; NaN prints as "nan" regardless of sign.
std::string g17(double v);

/// %.6g; NaN prints as "nan".
std::string g6(double v);

/// One flat JSON object per call, keys in insertion order, doubles via g17.
class JsonLine {
  public:
    JsonLine& field(const std::string& key, double v);
    JsonLine& field(const std::string& key, const std::string& v);
    JsonLine& field(const std::string& key, bool v);
    JsonLine& field_int(const std::string& key, long long v);
    JsonLine& field_number(const std::string& key, const std::string& formatted);
    std::string str() const;  ///< "{...}" without trailing newline

  private:
    std::vector<std::pair<std::string, std::string>> parts_;
};

/// Comma-joins pre-formatted cells.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace qtd::fmt
