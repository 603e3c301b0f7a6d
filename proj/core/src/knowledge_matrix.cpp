#include "onc/knowledge_matrix.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace onc {

namespace {

using Row = KnowledgeMatrix::Row;

// dst += c * src over a sorted sparse representation; zero entries are dropped.
void axpy(Row& dst, Symbol c, std::span<const Term> src, const GaloisField& f, Row& scratch) {
  scratch.clear();
  scratch.reserve(dst.size() + src.size());
  auto a = dst.begin();
  auto b = src.begin();
  while (a != dst.end() || b != src.end()) {
    if (b == src.end() || (a != dst.end() && a->packet < b->packet)) {
      scratch.push_back(*a++);
    } else if (a == dst.end() || b->packet < a->packet) {
      scratch.push_back(Term{b->packet, f.mul(c, b->coeff)});
      ++b;
    } else {
      const Symbol v = GaloisField::add(a->coeff, f.mul(c, b->coeff));
      if (v != 0) scratch.push_back(Term{a->packet, v});
      ++a;
      ++b;
    }
  }
  dst.swap(scratch);
}

const Term* find_term(const Row& row, PacketId p) {
  auto it = std::lower_bound(row.begin(), row.end(), p,
                             [](const Term& t, PacketId key) { return t.packet < key; });
  return (it != row.end() && it->packet == p) ? &*it : nullptr;
}

}  // namespace

std::vector<PacketId> CodedPacket::support() const {
  std::vector<PacketId> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.packet);
  return out;
}

std::vector<Symbol> CodedPacket::coefficients() const {
  std::vector<Symbol> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.coeff);
  return out;
}

void CodedPacket::validate(const GaloisField& field) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0 || !field.contains(terms[i].coeff)) {
      throw std::invalid_argument("coded packet has a zero or out-of-field coefficient");
    }
    if (i > 0 && terms[i - 1].packet >= terms[i].packet) {
      throw std::invalid_argument("coded packet support must be strictly increasing");
    }
  }
}

std::string CodedPacket::support_string() const {
  if (terms.empty()) return "-";
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += '+';
    out += std::to_string(t.packet + 1);
  }
  return out;
}

std::string CodedPacket::coefficient_string(const GaloisField& field) const {
  std::string out;
  const char* fmt = field.bits() > 8 ? "%04x" : "%02x";
  for (const auto& t : terms) {
    if (!out.empty()) out += ':';
    char buf[8];
    std::snprintf(buf, sizeof buf, fmt, static_cast<unsigned>(t.coeff));
    out += buf;
  }
  return out;
}

Row KnowledgeMatrix::reduce(std::span<const Term> terms) const {
  Row out;
  Row scratch;
  for (const auto& t : terms) {
    if (t.coeff == 0 || is_decoded(t.packet)) continue;
    if (auto it = pending_.find(t.packet); it != pending_.end()) {
      // Subtracting coeff * row cancels the pivot and only adds non-pivot columns.
      axpy(out, t.coeff, std::span<const Term>(it->second).subspan(1), *field_, scratch);
    } else {
      const Term single[] = {t};
      axpy(out, 1, single, *field_, scratch);
    }
  }
  return out;
}

bool KnowledgeMatrix::is_innovative(const CodedPacket& pkt) const { return !reduce(pkt.terms).empty(); }

InsertOutcome KnowledgeMatrix::insert(const CodedPacket& pkt) {
  InsertOutcome outcome;
  Row r = reduce(pkt.terms);
  if (r.empty()) return outcome;

  const PacketId pivot = r.front().packet;
  if (const Symbol lead = r.front().coeff; lead != 1) {
    const Symbol scale = field_->inv(lead);
    for (auto& t : r) t.coeff = field_->mul(t.coeff, scale);
  }

  Row scratch;
  std::vector<PacketId> collapsed;
  for (auto& [p, row] : pending_) {
    if (const Term* hit = find_term(row, pivot)) {
      axpy(row, hit->coeff, r, *field_, scratch);
      if (row.size() == 1) collapsed.push_back(p);
    }
  }

  outcome.innovative = true;
  outcome.newly_seen.push_back(pivot);
  for (PacketId p : collapsed) {
    pending_.erase(p);
    mark_decoded(p);
    outcome.newly_decoded.push_back(p);
  }
  if (r.size() == 1) {
    mark_decoded(pivot);
    outcome.newly_decoded.push_back(pivot);
  } else {
    pending_.emplace(pivot, std::move(r));
  }
  std::sort(outcome.newly_decoded.begin(), outcome.newly_decoded.end());
  advance_cursors();
  return outcome;
}

void KnowledgeMatrix::mark_decoded(PacketId p) {
  if (p >= decoded_.size()) decoded_.resize(std::max<std::size_t>(p + 1, decoded_.size() * 2), 0);
  decoded_[p] = 1;
  ++decoded_count_;
}

void KnowledgeMatrix::advance_cursors() {
  while (is_seen(oldest_unseen_)) ++oldest_unseen_;
  while (is_decoded(oldest_undecoded_)) ++oldest_undecoded_;
}

std::vector<PacketId> KnowledgeMatrix::seen_set() const {
  std::vector<PacketId> out = decoded_set();
  for (const auto& [p, row] : pending_) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PacketId> KnowledgeMatrix::decoded_set() const {
  std::vector<PacketId> out;
  out.reserve(decoded_count_);
  for (std::size_t p = 0; p < decoded_.size(); ++p) {
    if (decoded_[p]) out.push_back(static_cast<PacketId>(p));
  }
  return out;
}

std::optional<PacketId> KnowledgeMatrix::oldest_unseen_in_rows() const {
  std::optional<PacketId> best;
  for (const auto& [p, row] : pending_) {
    const PacketId candidate = row[1].packet;  // rows here always carry a non-pivot entry
    if (!best || candidate < *best) best = candidate;
  }
  return best;
}

std::vector<PacketId> KnowledgeMatrix::unseen_in_rows() const {
  std::vector<PacketId> out;
  for (const auto& [p, row] : pending_) {
    for (std::size_t i = 1; i < row.size(); ++i) out.push_back(row[i].packet);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KnowledgeMatrix::Row KnowledgeMatrix::row(PacketId p) const {
  if (is_decoded(p)) return Row{Term{p, 1}};
  if (auto it = pending_.find(p); it != pending_.end()) return it->second;
  return {};
}

bool KnowledgeMatrix::is_reduced() const {
  for (const auto& [p, row] : pending_) {
    if (row.size() < 2 || row.front().packet != p || row.front().coeff != 1) return false;
    for (std::size_t i = 1; i < row.size(); ++i) {
      const PacketId col = row[i].packet;
      if (row[i].coeff == 0 || row[i - 1].packet >= col) return false;
      if (is_seen(col)) return false;  // pivot columns must be zero in every other row
    }
    if (is_decoded(p)) return false;
  }
  return true;
}

}  // namespace onc
