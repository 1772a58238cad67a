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

#include "evote/ballotbox/vote_chain.h"

#include <array>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"

namespace evote::ballotbox {
namespace {

constexpr std::uint8_t kVoteRecord = 'V';
constexpr std::uint8_t kBlockRecord = 'B';

crypto::Signature CommSignature(Bytes bytes) {
  return {std::move(bytes), crypto::KeyPurpose::kCommunication};
}

}  // namespace

Bytes VoteChain::EncodeVote(const StoredVote& v) {
  BinaryWriter w;
  w.U8(kVoteRecord);
  w.U64(static_cast<std::uint64_t>(v.sequence_no));
  w.Field(v.envelope.Serialize());
  w.Field(v.vote_signature.bytes);
  return w.Take();
}

Bytes VoteChain::EncodeBlock(const VoteBlock& b) {
  BinaryWriter w;
  w.U8(kBlockRecord);
  w.U64(static_cast<std::uint64_t>(b.block_no));
  w.U64(static_cast<std::uint64_t>(b.first_sequence));
  w.U64(static_cast<std::uint64_t>(b.count));
  w.Field(b.block_signature.bytes);
  return w.Take();
}

VoteChain VoteChain::FromRecords(const std::vector<Bytes>& records) {
  VoteChain chain;
  try {
    for (const auto& rec : records) {
      BinaryReader r(rec);
      const std::uint8_t kind = r.U8();
      if (kind == kVoteRecord) {
        StoredVote v;
        v.sequence_no = static_cast<std::int64_t>(r.U64());
        v.envelope = crypto::SealedEnvelope::Parse(r.Field());
        v.vote_signature = CommSignature(r.Field());
        chain.votes.push_back(std::move(v));
      } else if (kind == kBlockRecord) {
        VoteBlock b;
        b.block_no = static_cast<std::int64_t>(r.U64());
        b.first_sequence = static_cast<std::int64_t>(r.U64());
        b.count = static_cast<std::int64_t>(r.U64());
        b.block_signature = CommSignature(r.Field());
        chain.blocks.push_back(std::move(b));
      } else {
        throw Error(ErrorCode::kCorrupted, "unknown vote store record");
      }
      if (!r.AtEnd()) throw Error(ErrorCode::kCorrupted, "trailing bytes in vote store record");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorrupted) throw;
    throw Error(ErrorCode::kCorrupted, std::string("vote store record: ") + e.what());
  }
  return chain;
}

std::vector<Bytes> VoteChain::ToRecords() const {
  // Each block record follows the last vote it covers.
  std::vector<Bytes> out;
  std::size_t b = 0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    out.push_back(EncodeVote(votes[i]));
    while (b < blocks.size() &&
           blocks[b].first_sequence + blocks[b].count == static_cast<std::int64_t>(i) + 1) {
      out.push_back(EncodeBlock(blocks[b++]));
    }
  }
  for (; b < blocks.size(); ++b) out.push_back(EncodeBlock(blocks[b]));
  return out;
}

std::int64_t VoteChain::SealedVotes() const {
  return blocks.empty() ? 0 : blocks.back().first_sequence + blocks.back().count;
}

StoredVote MakeStoredVote(std::int64_t sequence_no, std::string_view canonical_vote,
                          const crypto::PublicKey& database, const crypto::PrivateKey& signer) {
  StoredVote v;
  v.sequence_no = sequence_no;
  v.envelope = crypto::Seal(database, AsBytes(canonical_vote));
  v.vote_signature = crypto::Sign(signer, v.envelope.Serialize());
  return v;
}

Bytes BlockMessage(const std::vector<StoredVote>& votes, std::int64_t first, std::int64_t count,
                   const crypto::Signature* previous) {
  Bytes msg;
  for (std::int64_t i = first; i < first + count; ++i) {
    const auto& sig = votes.at(static_cast<std::size_t>(i)).vote_signature.bytes;
    msg.insert(msg.end(), sig.begin(), sig.end());
  }
  if (previous != nullptr) {
    msg.insert(msg.end(), previous->bytes.begin(), previous->bytes.end());
  } else {
    msg.insert(msg.end(), 32, 0);
  }
  return msg;
}

VoteBlock SealBlock(const VoteChain& chain, std::int64_t first, std::int64_t count,
                    const crypto::PrivateKey& signer) {
  VoteBlock b;
  b.block_no = static_cast<std::int64_t>(chain.blocks.size());
  b.first_sequence = first;
  b.count = count;
  const crypto::Signature* prev = chain.blocks.empty() ? nullptr : &chain.blocks.back().block_signature;
  b.block_signature = crypto::Sign(signer, BlockMessage(chain.votes, first, count, prev));
  return b;
}

nlohmann::json ChainReport::ToJson() const {
  nlohmann::json j{{"ok", ok()},
                   {"bad_vote_signatures", bad_vote_signatures},
                   {"sequence_breaks", sequence_breaks},
                   {"flagged_blocks", flagged_blocks},
                   {"unsealed_votes", unsealed_votes},
                   {"issues", issues}};
  j["chain_break_at"] = chain_break_at ? nlohmann::json(*chain_break_at) : nlohmann::json();
  return j;
}

ChainReport VerifyChain(const VoteChain& chain, const crypto::PublicKey& ballot_box,
                        std::size_t block_size, bool require_sealed) {
  ChainReport report;
  const auto n = static_cast<std::int64_t>(chain.votes.size());
  const auto B = static_cast<std::int64_t>(block_size);
  auto issue = [&](std::string s) { report.issues.push_back(std::move(s)); };
  auto flag_block = [&](std::int64_t b) {
    if (report.flagged_blocks.empty() || report.flagged_blocks.back() != b) {
      report.flagged_blocks.push_back(b);
    }
  };

  std::vector<bool> vote_bad(chain.votes.size(), false);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& v = chain.votes[static_cast<std::size_t>(i)];
    if (v.sequence_no != i) {
      report.sequence_breaks.push_back(i);
      issue("vote " + std::to_string(i) + ": sequence number " + std::to_string(v.sequence_no));
      vote_bad[static_cast<std::size_t>(i)] = true;
    }
    if (!crypto::Verify(ballot_box, v.envelope.Serialize(), v.vote_signature)) {
      report.bad_vote_signatures.push_back(i);
      issue("vote " + std::to_string(i) + ": signature invalid");
      vote_bad[static_cast<std::size_t>(i)] = true;
    }
  }

  std::int64_t covered = 0;
  for (std::size_t k = 0; k < chain.blocks.size(); ++k) {
    const auto& b = chain.blocks[k];
    const auto pos = static_cast<std::int64_t>(k);
    const bool last = k + 1 == chain.blocks.size();
    bool bad = false;
    if (b.block_no != pos) {
      issue("block " + std::to_string(pos) + ": numbered " + std::to_string(b.block_no));
      bad = true;
    }
    if (b.first_sequence != covered || b.count < 1 || b.count > B || (!last && b.count != B) ||
        b.first_sequence + b.count > n) {
      issue("block " + std::to_string(pos) + ": covers wrong vote range");
      bad = true;
    } else {
      const crypto::Signature* prev = k == 0 ? nullptr : &chain.blocks[k - 1].block_signature;
      if (!crypto::Verify(ballot_box, BlockMessage(chain.votes, b.first_sequence, b.count, prev),
                          b.block_signature)) {
        issue("block " + std::to_string(pos) + ": signature invalid");
        bad = true;
      }
      for (std::int64_t i = b.first_sequence; i < b.first_sequence + b.count; ++i) {
        if (vote_bad[static_cast<std::size_t>(i)]) {
          issue("block " + std::to_string(pos) + ": contains bad vote " + std::to_string(i));
          bad = true;
          break;
        }
      }
    }
    if (bad) {
      flag_block(pos);
      if (!report.chain_break_at) report.chain_break_at = pos;
    }
    covered = b.first_sequence + b.count;
  }

  report.unsealed_votes = std::max<std::int64_t>(0, n - covered);
  if (report.unsealed_votes >= B) {
    issue("full block of votes without a seal");
  } else if (require_sealed && report.unsealed_votes > 0) {
    issue(std::to_string(report.unsealed_votes) + " votes after the last sealed block");
  }
  for (std::int64_t i = covered; i < n; ++i) {
    if (vote_bad[static_cast<std::size_t>(i)]) {
      issue("unsealed vote " + std::to_string(i) + " is bad");
      break;
    }
  }
  return report;
}

}  // namespace evote::ballotbox
