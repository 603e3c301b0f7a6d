#pragma once

#include <string>
#include <vector>

#include "onc/field.hpp"
#include "onc/simulator.hpp"

namespace onc {

/// Header: slot,support,coefficients,reception,newly_seen,newly_decoded,queue_size,leaders.
/// Packets and receivers are 1-based; per-receiver fields are ';'-separated,
/// packets within one receiver '+'-joined, '-' marks an empty list.
std::string trace_to_csv(const std::vector<SlotRecord>& rows, const GaloisField& field);
std::string trace_to_json(const std::vector<SlotRecord>& rows, const GaloisField& field);

/// Per-slot support strings, e.g. {"1", "1+2", ...}.
std::vector<std::string> sent_column(const std::vector<SlotRecord>& rows);

}  // namespace onc
