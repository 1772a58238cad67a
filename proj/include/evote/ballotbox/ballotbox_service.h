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

#ifndef EVOTE_BALLOTBOX_BALLOTBOX_SERVICE_H_
#define EVOTE_BALLOTBOX_BALLOTBOX_SERVICE_H_

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "evote/ballotbox/ballot.h"
#include "evote/ballotbox/vote_chain.h"
#include "evote/common/durable_log.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/attestation.h"
#include "evote/wire/service_base.h"

namespace evote::ballotbox {

// What a voter presents: the token and the registry's signature over it.
struct VoterToken {
  SecureBytes value;
  crypto::Signature signature;
};

struct CastReceipt {
  bool committed = false;
};

struct BallotBoxConfig {
  std::size_t block_size = kDefaultBlockSize;
};

// Step boundaries inside ConfirmVote, in order.
inline constexpr std::array<std::string_view, 10> kConfirmSteps = {
    "before_seal",  "before_sign",  "before_prepare",    "before_append",   "mid_append",
    "before_flush", "before_block_seal", "before_finalize", "before_erase", "done"};

// Ballot box server. Tokens and pending casts live in memory only; votes
// are sealed to the database key, signed, and chained in blocks.
class BallotBoxService final : public wire::ServiceBase {
 public:
  // Called at every confirm step boundary; returning true crashes the
  // component at that point.
  using StepHook = std::function<bool(std::string_view op, int step)>;

  BallotBoxService(crypto::Keyring& keyring, crypto::KeyDirectory directory, Ballot ballot,
                   const Clock& clock, wire::Transport& transport, BallotBoxConfig config = {},
                   std::optional<std::filesystem::path> data_dir = std::nullopt);
  ~BallotBoxService() override;

  // Registry side.
  void RegisterToken(ByteView token);
  void RevokeToken(ByteView token);

  // Voter side. Unknown, revoked and spent tokens all fail with kNotFound.
  const Ballot& FetchBallot(const VoterToken& token);
  // Returns the canonical echo; nothing is stored durably.
  std::string SubmitVote(const VoterToken& token, const VoteContent& vote);
  CastReceipt ConfirmVote(const VoterToken& token);
  void Cancel(const VoterToken& token);

  std::int64_t StoredCount() const;
  bool accepting() const;

  // Committee side, each gated by a signed attestation.
  void Stop(const wire::StateAttestation& attestation);
  TallyResult Tally(const wire::StateAttestation& attestation);
  void ClearVotes(const wire::StateAttestation& attestation);
  ChainReport VerifyChain() const;

  // Simulated process restart: volatile state is lost, the log tail is
  // repaired and the registry is told how many votes are stored.
  void Restart();
  // Retries notifications the registry could not take.
  void Poll();

  void SetStepHook(StepHook hook);
  VoteChain chain() const;
  const Ballot& ballot() const { return ballot_; }
  std::size_t live_tokens() const;

  wire::Json Handle(Component from, std::string_view type, const wire::Json& body) override;
  std::string DatabaseImage() const override;
  bool StorageIntact() const override;

 protected:
  void OnKeysUnlocked() override;
  wire::Json HealthDetails() const override;

 private:
  struct LiveToken {
    SecureBytes value;
    Millis issued_at = 0;
    std::optional<std::string> pending;  // canonical vote awaiting confirm
    Millis echo_sent_at = 0;
    bool confirming = false;
  };

  // Requires mu_. Constant-time scan over all live tokens.
  LiveToken* FindLocked(ByteView token);
  LiveToken& RequireLive(const VoterToken& token);
  void EraseLocked(ByteView token);
  bool Step(int step);
  // Requires append_mu_: seals every full block lacking a seal.
  void SealFullBlocksLocked();
  void SealRemainderLocked();
  void RecoverAfterRestart();
  void NotifyRegistry(std::string_view type, ByteView token);

  crypto::KeyDirectory directory_;
  Ballot ballot_;
  wire::Transport& transport_;
  BallotBoxConfig config_;
  wire::AttestationVerifier attestations_;

  mutable std::mutex mu_;
  bool accepting_ = false;
  bool stopped_ = false;
  std::vector<LiveToken> tokens_;
  std::vector<SecureBytes> pending_finalize_;
  bool pending_recover_ = false;
  StepHook step_hook_;

  mutable std::mutex append_mu_;
  std::unique_ptr<DurableLog> log_;
  VoteChain chain_;
};

}  // namespace evote::ballotbox

#endif  // EVOTE_BALLOTBOX_BALLOTBOX_SERVICE_H_
