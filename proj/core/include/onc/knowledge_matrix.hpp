#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onc/field.hpp"

namespace onc {

/// Global packet sequence number, 0-based (packet p1 is 0). Lower is older.
using PacketId = std::uint32_t;

struct Term {
  PacketId packet;
  Symbol coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Linear combination of source packets: strictly increasing support, no zero coefficients.
struct CodedPacket {
  std::vector<Term> terms;

  static CodedPacket uncoded(PacketId p) { return CodedPacket{{Term{p, 1}}}; }

  bool empty() const noexcept { return terms.empty(); }
  bool is_uncoded() const noexcept { return terms.size() == 1 && terms.front().coeff == 1; }
  std::vector<PacketId> support() const;
  std::vector<Symbol> coefficients() const;

  /// Throws std::invalid_argument when the support is not strictly increasing
  /// or a coefficient is zero or outside the field.
  void validate(const GaloisField& field) const;

  /// "4+6" style rendering with 1-based packet numbers; "-" when empty.
  std::string support_string() const;
  /// Two-digit (or four-digit for m > 8) hex coefficients joined by ':'.
  std::string coefficient_string(const GaloisField& field) const;

  friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

struct InsertOutcome {
  bool innovative = false;
  std::vector<PacketId> newly_seen;
  std::vector<PacketId> newly_decoded;
};

/// A receiver's received combinations in reduced row echelon form.
///
/// Columns are ordered oldest packet first and every row's pivot is its
/// leftmost nonzero entry, so a packet is seen exactly when it is a pivot
/// column: its row reads p + (combination of strictly newer packets).
/// Rows whose support collapsed to the pivot alone are decoded; they are
/// kept only as a flag since they can no longer influence seen/decoded
/// answers.
class KnowledgeMatrix {
 public:
  using Row = std::vector<Term>;

  explicit KnowledgeMatrix(const GaloisField& field) : field_(&field) {}

  const GaloisField& field() const noexcept { return *field_; }

  InsertOutcome insert(const CodedPacket& pkt);

  /// True when inserting `pkt` would raise the rank. Does not modify the matrix.
  bool is_innovative(const CodedPacket& pkt) const;

  std::size_t rank() const noexcept { return pending_.size() + decoded_count_; }
  std::size_t decoded_count() const noexcept { return decoded_count_; }
  std::size_t undecoded_row_count() const noexcept { return pending_.size(); }

  bool is_decoded(PacketId p) const noexcept { return p < decoded_.size() && decoded_[p] != 0; }
  bool is_seen(PacketId p) const noexcept { return is_decoded(p) || pending_.contains(p); }

  std::vector<PacketId> seen_set() const;
  std::vector<PacketId> decoded_set() const;

  /// Smallest packet index that is not seen.
  PacketId oldest_unseen() const noexcept { return oldest_unseen_; }
  /// Smallest packet index that is not decoded.
  PacketId oldest_undecoded() const noexcept { return oldest_undecoded_; }

  /// Oldest unseen packet that appears in some received, still undecoded combination.
  std::optional<PacketId> oldest_unseen_in_rows() const;
  /// All unseen packets that appear in undecoded rows, ascending.
  std::vector<PacketId> unseen_in_rows() const;

  /// Seen-but-undecoded rows keyed by pivot (the current chain).
  const std::map<PacketId, Row>& undecoded_rows() const noexcept { return pending_; }

  /// Full row for pivot `p` (a unit row when decoded); empty when p is unseen.
  Row row(PacketId p) const;

  /// Checks the echelon invariants; used by tests and debug assertions.
  bool is_reduced() const;

  friend bool operator==(const KnowledgeMatrix& a, const KnowledgeMatrix& b) {
    return a.field_ == b.field_ && a.pending_ == b.pending_ && a.decoded_count_ == b.decoded_count_ &&
           a.decoded_set() == b.decoded_set();
  }

 private:
  Row reduce(std::span<const Term> terms) const;
  void mark_decoded(PacketId p);
  void advance_cursors();

  const GaloisField* field_;
  std::map<PacketId, Row> pending_;
  std::vector<std::uint8_t> decoded_;
  std::size_t decoded_count_ = 0;
  PacketId oldest_unseen_ = 0;
  PacketId oldest_undecoded_ = 0;
};

}  // namespace onc
