#include "onc/trace.hpp"

#include <sstream>

#include <json.hpp>

namespace onc {

namespace {

std::string packet_list(const std::vector<PacketId>& packets) {
  if (packets.empty()) return "-";
  std::string out;
  for (PacketId p : packets) {
    if (!out.empty()) out += '+';
    out += std::to_string(p + 1);
  }
  return out;
}

std::string per_receiver(const std::vector<std::vector<PacketId>>& lists) {
  std::string out;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (i > 0) out += ';';
    out += packet_list(lists[i]);
  }
  return out;
}

std::string reception_field(const ReceptionBitmap& bm) {
  std::string out;
  for (std::size_t i = 0; i < bm.size(); ++i) {
    if (i > 0) out += ';';
    out += bm[i] ? "OK" : "E";
  }
  return out;
}

std::string leaders_field(const std::vector<std::size_t>& leaders) {
  std::string out;
  for (std::size_t i : leaders) {
    if (!out.empty()) out += '+';
    out += std::to_string(i + 1);
  }
  return out;
}

}  // namespace

std::string trace_to_csv(const std::vector<SlotRecord>& rows, const GaloisField& field) {
  std::ostringstream out;
  out << "slot,support,coefficients,reception,newly_seen,newly_decoded,queue_size,leaders\n";
  for (const auto& r : rows) {
    const std::string coeffs = r.sent.empty() ? "-" : r.sent.coefficient_string(field);
    out << r.slot << ',' << r.sent.support_string() << ',' << coeffs << ',' << reception_field(r.reception) << ','
        << per_receiver(r.newly_seen) << ',' << per_receiver(r.newly_decoded) << ',' << r.queue_size << ','
        << leaders_field(r.leaders) << '\n';
  }
  return out.str();
}

std::string trace_to_json(const std::vector<SlotRecord>& rows, const GaloisField& field) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto one_based = [](const std::vector<PacketId>& v) {
    std::vector<std::uint64_t> out;
    for (PacketId p : v) out.push_back(static_cast<std::uint64_t>(p) + 1);
    return out;
  };
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["slot"] = r.slot;
    row["support"] = one_based(r.sent.support());
    row["coefficients"] = r.sent.empty() ? "" : r.sent.coefficient_string(field);
    std::vector<std::string> reception;
    for (std::size_t i = 0; i < r.reception.size(); ++i) reception.push_back(r.reception[i] ? "OK" : "E");
    row["reception"] = reception;
    nlohmann::ordered_json seen = nlohmann::ordered_json::array(), decoded = nlohmann::ordered_json::array();
    for (const auto& s : r.newly_seen) seen.push_back(one_based(s));
    for (const auto& d : r.newly_decoded) decoded.push_back(one_based(d));
    row["newly_seen"] = std::move(seen);
    row["newly_decoded"] = std::move(decoded);
    row["queue_size"] = r.queue_size;
    std::vector<std::size_t> leaders;
    for (auto i : r.leaders) leaders.push_back(i + 1);
    row["leaders"] = leaders;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::vector<std::string> sent_column(const std::vector<SlotRecord>& rows) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.sent.support_string());
  return out;
}

}  // namespace onc
