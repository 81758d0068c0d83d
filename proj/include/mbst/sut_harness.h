// Copyright 2026 The mbst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBST_SUT_HARNESS_H_
#define MBST_SUT_HARNESS_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "mbst/run_report.h"
#include "mbst/trace_expansion.h"

namespace mbst {

enum class ResponseStatus { kOk, kReject, kErr };

struct SutResponse {
  ResponseStatus status = ResponseStatus::kOk;
  // State tag for OK, reason for REJECT, description for ERR.
  std::string detail;
  std::optional<std::string> state_tag;

  static SutResponse Ok(std::string tag);
  static SutResponse Reject(std::string reason);
  static SutResponse Err(std::string detail);

  std::string to_wire() const;
  // Throws AdapterFailure on a line that is not a response.
  static SutResponse parse(std::string_view line);

  friend bool operator==(const SutResponse&, const SutResponse&) = default;
};

class SutAdapter {
 public:
  virtual ~SutAdapter() = default;
  virtual void reset() = 0;
  virtual SutResponse stimulate(const MessageEvent& event) = 0;
  virtual void close() {}
};

// --- reference transfer-order server ---------------------------------------

enum class OrderStage {
  kInit,
  kOrderTypeSet,
  kAwaitAccount,
  kAwaitTan,
  kCommitted,
  kAborted,
};

std::string_view to_string(OrderStage s);

struct ServerState {
  OrderStage stage = OrderStage::kInit;
  int retries = 0;  // invalid TANs seen so far

  friend bool operator==(const ServerState&, const ServerState&) = default;
};

inline constexpr int kMaxTanRetries = 2;

// Pure transition function of the correct server.
std::pair<ServerState, SutResponse> reference_sut_step(
    const ServerState& state, const MessageEvent& event);

// V1 commits on any TAN. V2 never aborts and keeps answering TANs after the
// commit.
enum class SutVariant { kReference, kV1, kV2 };

std::string_view to_string(SutVariant v);
std::optional<SutVariant> sut_variant_from_string(std::string_view s);

std::pair<ServerState, SutResponse> sut_step(SutVariant variant,
                                             const ServerState& state,
                                             const MessageEvent& event);

class InProcessAdapter : public SutAdapter {
 public:
  explicit InProcessAdapter(SutVariant variant) : variant_(variant) {}
  void reset() override { state_ = {}; }
  SutResponse stimulate(const MessageEvent& event) override;
  const ServerState& state() const { return state_; }

 private:
  SutVariant variant_;
  ServerState state_;
};

// --- wire protocol ---------------------------------------------------------

// "MSG <signature> <name>=<percent-encoded value>..."
std::string encode_request(const MessageEvent& event);
// Inverse of encode_request; only names and values are restored. Throws
// AdapterFailure on malformed input.
MessageEvent decode_request(std::string_view line);

// Answers one protocol line for a server speaking `variant`; sets `bye`
// when the peer ended the session.
std::string serve_line(SutVariant variant, ServerState& state,
                       std::string_view line, bool& bye);

// Speaks the protocol over a pair of file descriptors until BYE or EOF.
void serve_stream(SutVariant variant, int in_fd, int out_fd);

// Reference server on a TCP port; one thread per connection.
class TcpServer {
 public:
  // Port 0 picks an ephemeral port. Throws AdapterFailure.
  TcpServer(SutVariant variant, std::uint16_t port,
            const std::string& host = "127.0.0.1");
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }
  void stop();
  // Blocks until stop() is called from elsewhere.
  void wait();

 private:
  void AcceptLoop();

  SutVariant variant_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
};

// Adapter over a byte stream (a TCP connection or a child's stdio).
std::unique_ptr<SutAdapter> connect_tcp(const std::string& host,
                                        std::uint16_t port, int timeout_ms);
std::unique_ptr<SutAdapter> spawn_stdio(const std::string& command,
                                        int timeout_ms);

using AdapterFactory = std::function<std::unique_ptr<SutAdapter>()>;

inline constexpr int kDefaultTimeoutMs = 5000;

// builtin:reference | builtin:v1 | builtin:v2 | tcp:<host>:<port> |
// stdio:<command>. Throws ConfigError for anything else.
AdapterFactory make_adapter_factory(const std::string& spec,
                                    int timeout_ms = kDefaultTimeoutMs);

// --- verdicts --------------------------------------------------------------

struct OracleConfig {
  // OK tags that only an authorized sequence may reach.
  std::set<std::string> protected_tags{"committed"};
};

// Resets the adapter and plays the trace. Baselines PASS when every
// expectation holds, no stimulus is rejected unexpectedly and the last
// answer is OK; anything else is ERROR. Mutant traces are replayed against
// the reference server in parallel: a rejection before the first point
// where the reference rejects is PASS, reaching a protected tag the
// reference would not reach or accepting what the reference rejects is
// VULN, ERR or a late rejection is INCONCLUSIVE. A REJECT is expected when
// the next event is a FROM_SUT expectation naming its reason.
//
// Transport failures yield ERROR and set `*transport_failure`.
Verdict run_trace(SutAdapter& adapter, const Trace& trace,
                  const OracleConfig& oracle, std::vector<Exchange>* log,
                  bool* transport_failure = nullptr);

// Recomputes a VULN from the exchange log alone: the flagged exchange got
// an OK that the reference server, fed the same requests, does not give.
bool vuln_is_sound(const TraceResult& result,
                   const OracleConfig& oracle = OracleConfig());

struct CampaignConfig {
  std::string campaign_id = "campaign";
  std::string adapter_spec;
  bool stop_on_vuln = false;
  // One adapter per worker; ignored when stop_on_vuln is set.
  int workers = 1;
  OracleConfig oracle;
};

// Results keep the input order. Throws ConfigError for an empty trace list
// and AdapterFailure when the factory cannot produce an adapter.
RunReport run_campaign(const std::vector<Trace>& traces,
                       const AdapterFactory& factory,
                       const CampaignConfig& cfg);

}  // namespace mbst

#endif  // MBST_SUT_HARNESS_H_
