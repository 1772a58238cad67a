// Copyright 2026 The evote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVOTE_BALLOTBOX_VOTE_CHAIN_H_
#define EVOTE_BALLOTBOX_VOTE_CHAIN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evote/crypto/keys.h"
#include "evote/crypto/seal.h"

namespace evote::ballotbox {

inline constexpr std::size_t kDefaultBlockSize = 30;

// A committed vote: the canonical content sealed to the ballot box
// database key, signed with the ballot box communication key.
struct StoredVote {
  std::int64_t sequence_no = 0;
  crypto::SealedEnvelope envelope;
  crypto::Signature vote_signature;
};

// Seal over votes [first_sequence, first_sequence + count).
struct VoteBlock {
  std::int64_t block_no = 0;
  std::int64_t first_sequence = 0;
  std::int64_t count = 0;
  crypto::Signature block_signature;
};

// Everything the vote store holds, in stored order.
struct VoteChain {
  std::vector<StoredVote> votes;
  std::vector<VoteBlock> blocks;

  // Durable record encoding: one record per vote or block seal.
  static Bytes EncodeVote(const StoredVote& v);
  static Bytes EncodeBlock(const VoteBlock& b);
  // Rebuilds the chain from records in log order. Throws kCorrupted.
  static VoteChain FromRecords(const std::vector<Bytes>& records);
  std::vector<Bytes> ToRecords() const;

  std::int64_t SealedVotes() const;
};

StoredVote MakeStoredVote(std::int64_t sequence_no, std::string_view canonical_vote,
                          const crypto::PublicKey& database, const crypto::PrivateKey& signer);

// Signed message of a block: the member vote signatures followed by the
// previous block signature, or 32 zero bytes for block 0.
Bytes BlockMessage(const std::vector<StoredVote>& votes, std::int64_t first, std::int64_t count,
                   const crypto::Signature* previous);
VoteBlock SealBlock(const VoteChain& chain, std::int64_t first, std::int64_t count,
                    const crypto::PrivateKey& signer);

struct ChainReport {
  std::vector<std::int64_t> bad_vote_signatures;  // by position
  std::vector<std::int64_t> sequence_breaks;      // positions whose number is off
  std::vector<std::int64_t> flagged_blocks;       // by position
  std::optional<std::int64_t> chain_break_at;     // first block whose link fails
  std::int64_t unsealed_votes = 0;
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  nlohmann::json ToJson() const;
};

// `require_sealed` demands every vote be covered by a block, as after stop.
ChainReport VerifyChain(const VoteChain& chain, const crypto::PublicKey& ballot_box,
                        std::size_t block_size, bool require_sealed);

}  // namespace evote::ballotbox

#endif  // EVOTE_BALLOTBOX_VOTE_CHAIN_H_
