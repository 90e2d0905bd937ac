#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "scrf/protocol.hpp"
#include "scrf/types.hpp"

namespace scrf {

using Bits = std::vector<bool>;

// Binary protocol in which the speaker alternates every round. Inputs are
// opaque to the coding schemes.
class AlternatingProtocol {
 public:
  virtual ~AlternatingProtocol() = default;
  virtual std::uint32_t length() const = 0;
  virtual Party first_speaker() const { return Party::alice; }
  // Bit sent at position prefix.size() by the party owning that position.
  virtual bool next_bit(Input own_input, const Bits& prefix) const = 0;

  Party speaker_at(std::size_t position) const {
    return position % 2 == 0 ? first_speaker() : other(first_speaker());
  }
  Bits transcript(Input x, Input y) const;
};

// Complete binary tree with an independent random bit table per node.
class RandomAlternatingProtocol final : public AlternatingProtocol {
 public:
  static constexpr std::uint32_t kInputDomain = 16;

  RandomAlternatingProtocol(std::uint32_t length, std::uint64_t seed, Party first = Party::alice);
  std::uint32_t length() const override { return length_; }
  Party first_speaker() const override { return first_; }
  bool next_bit(Input own_input, const Bits& prefix) const override;

 private:
  std::uint32_t length_;
  Party first_;
  std::vector<std::uint16_t> tables_;  // heap-indexed node -> bit per input
};

// Same idea for long protocols: each bit is a hash of seed, prefix and input.
class HashedAlternatingProtocol final : public AlternatingProtocol {
 public:
  HashedAlternatingProtocol(std::uint32_t length, std::uint64_t seed, Party first = Party::alice)
      : length_(length), seed_(seed), first_(first) {}
  std::uint32_t length() const override { return length_; }
  Party first_speaker() const override { return first_; }
  bool next_bit(Input own_input, const Bits& prefix) const override;

 private:
  std::uint32_t length_;
  std::uint64_t seed_;
  Party first_;
};

// Runs a binary KW protocol tree in alternating form; rounds whose speaker
// does not own the current node carry a dummy 0.
class KwAlternatingAdapter final : public AlternatingProtocol {
 public:
  explicit KwAlternatingAdapter(std::shared_ptr<const ProtocolTree> tree);
  std::uint32_t length() const override { return length_; }
  Party first_speaker() const override { return first_; }
  bool next_bit(Input own_input, const Bits& prefix) const override;

  // Node reached after replaying the given transcript.
  std::uint32_t decode(const Bits& transcript) const;
  const ProtocolTree& tree() const { return *tree_; }

 private:
  std::shared_ptr<const ProtocolTree> tree_;
  std::uint32_t length_ = 0;
  Party first_ = Party::alice;
};

}  // namespace scrf
