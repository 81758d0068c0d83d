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

#include "mbst/sut_harness.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>
#include <mutex>

#include "mbst/errors.h"
#include "mbst/text_util.h"
#include "mbst/value_domain.h"

namespace mbst {
namespace {

// Parameter domains the server enforces, per signature.
const std::map<std::string, std::vector<std::pair<std::string, ValueDomain>>>&
Signatures() {
  static const auto* kSigs =
      new std::map<std::string,
                   std::vector<std::pair<std::string, ValueDomain>>>{
          {"selectOrderType",
           {{"type", ValueDomain::Enum({"NATIONAL", "INTERNATIONAL"})}}},
          {"sendRecipientAmount",
           {{"recipient", ValueDomain::Text(1, 32)},
            {"amount", ValueDomain::Range(1, 100000)}}},
          {"sendNationalAccount",
           {{"account", ValueDomain::Pattern("9999999999")}}},
          {"sendInternationalAccount",
           {{"iban", ValueDomain::Pattern("DE99999999999999999999")}}},
          {"sendTAN", {{"tan", ValueDomain::Pattern("999999")}}},
      };
  return *kSigs;
}

const std::string* ArgValue(const MessageEvent& ev, std::string_view name) {
  for (const EventArg& a : ev.args) {
    if (a.name == name && a.value) return &*a.value;
  }
  return nullptr;
}

bool ParamsValid(const MessageEvent& ev) {
  for (const auto& [name, domain] : Signatures().at(ev.signature)) {
    const std::string* v = ArgValue(ev, name);
    if (!v || !domain.contains(*v)) return false;
  }
  return true;
}

bool TanValid(const MessageEvent& ev) {
  const std::string* v = ArgValue(ev, "tan");
  return v && ValueDomain::Pattern("999999").contains(*v);
}

std::pair<ServerState, SutResponse> Advance(ServerState s, OrderStage next) {
  s.stage = next;
  return {s, SutResponse::Ok(std::string(to_string(next)))};
}

std::pair<ServerState, SutResponse> Step(SutVariant variant,
                                         const ServerState& state,
                                         const MessageEvent& ev) {
  if (!Signatures().count(ev.signature)) {
    return {state, SutResponse::Reject("unknown_message")};
  }
  const bool tan = ev.signature == "sendTAN";
  if (state.stage == OrderStage::kCommitted && tan &&
      variant == SutVariant::kV2) {
    if (TanValid(ev)) return Advance(state, OrderStage::kCommitted);
    return {state, SutResponse::Reject("tan_invalid")};
  }
  if (state.stage == OrderStage::kCommitted ||
      state.stage == OrderStage::kAborted) {
    return {state, SutResponse::Reject("order_closed")};
  }
  OrderStage expected = OrderStage::kInit;
  OrderStage next = OrderStage::kInit;
  if (ev.signature == "selectOrderType") {
    expected = OrderStage::kInit;
    next = OrderStage::kOrderTypeSet;
  } else if (ev.signature == "sendRecipientAmount") {
    expected = OrderStage::kOrderTypeSet;
    next = OrderStage::kAwaitAccount;
  } else if (ev.signature == "sendNationalAccount" ||
             ev.signature == "sendInternationalAccount") {
    expected = OrderStage::kAwaitAccount;
    next = OrderStage::kAwaitTan;
  } else {
    expected = OrderStage::kAwaitTan;
    next = OrderStage::kCommitted;
  }
  if (state.stage != expected) {
    return {state, SutResponse::Reject("out_of_order")};
  }
  if (!tan) {
    if (!ParamsValid(ev)) return {state, SutResponse::Reject("invalid_param")};
    return Advance(state, next);
  }
  if (variant == SutVariant::kV1 || TanValid(ev)) {
    return Advance(state, OrderStage::kCommitted);
  }
  ServerState s = state;
  if (variant == SutVariant::kV2 || s.retries < kMaxTanRetries) {
    ++s.retries;
    return {s, SutResponse::Reject("tan_invalid")};
  }
  s.stage = OrderStage::kAborted;
  return {s, SutResponse::Reject("tan_retries_exhausted")};
}

// --- line transport --------------------------------------------------------

class LineChannel {
 public:
  LineChannel(int in_fd, int out_fd, int timeout_ms)
      : in_(in_fd), out_(out_fd), timeout_ms_(timeout_ms) {}

  void Send(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      ssize_t n = ::write(out_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterFailure(std::string("write failed: ") +
                             std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string Receive() {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(timeout_ms_);
    for (;;) {
      auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - std::chrono::steady_clock::now())
                      .count();
      if (left <= 0) throw AdapterFailure("timed out waiting for the SUT");
      pollfd p{in_, POLLIN, 0};
      int r = ::poll(&p, 1, static_cast<int>(left));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw AdapterFailure(std::string("poll failed: ") +
                             std::strerror(errno));
      }
      if (r == 0) continue;
      char buf[4096];
      ssize_t n = ::read(in_, buf, sizeof buf);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterFailure(std::string("read failed: ") +
                             std::strerror(errno));
      }
      if (n == 0) throw AdapterFailure("SUT closed the connection");
      buffer_.append(buf, static_cast<std::size_t>(n));
    }
  }

  std::string Call(const std::string& line) {
    Send(line);
    return Receive();
  }

 private:
  int in_;
  int out_;
  int timeout_ms_;
  std::string buffer_;
};

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

class StreamAdapter : public SutAdapter {
 public:
  StreamAdapter(int in_fd, int out_fd, int timeout_ms, pid_t child)
      : in_fd_(in_fd), out_fd_(out_fd), child_(child),
        channel_(in_fd, out_fd, timeout_ms) {}
  ~StreamAdapter() override { close(); }

  void reset() override {
    Live();
    SutResponse r = SutResponse::parse(channel_.Call("RESET"));
    if (r.status != ResponseStatus::kOk) {
      throw AdapterFailure("SUT refused RESET: " + r.to_wire());
    }
  }

  SutResponse stimulate(const MessageEvent& event) override {
    Live();
    return SutResponse::parse(channel_.Call(encode_request(event)));
  }

  void close() override {
    if (closed_) return;
    closed_ = true;
    try {
      channel_.Send("BYE");
    } catch (const AdapterFailure&) {
    }
    ::close(out_fd_);
    if (in_fd_ != out_fd_) ::close(in_fd_);
    if (child_ > 0) {
      bool reaped = false;
      for (int i = 0; i < 50 && !reaped; ++i) {
        reaped = ::waitpid(child_, nullptr, WNOHANG) != 0;
        if (!reaped) ::usleep(10000);
      }
      // Take down anything the command left running in its group.
      ::kill(-child_, SIGKILL);
      if (!reaped) ::waitpid(child_, nullptr, 0);
    }
  }

 private:
  void Live() const {
    if (closed_) throw AdapterFailure("adapter already closed");
  }

  int in_fd_;
  int out_fd_;
  pid_t child_;
  LineChannel channel_;
  bool closed_ = false;
};

bool Expected(const Trace& trace, std::size_t i, const SutResponse& r) {
  if (r.status != ResponseStatus::kReject) return false;
  return i + 1 < trace.events.size() &&
         trace.events[i + 1].direction == Direction::kFromSut &&
         trace.events[i + 1].signature == r.detail;
}

bool Matches(const SutResponse& r, const std::string& signature) {
  return r.status != ResponseStatus::kErr && r.detail == signature;
}

Verdict Make(VerdictKind k, std::string why,
             std::optional<std::size_t> at = std::nullopt) {
  return {k, std::move(why), at};
}

}  // namespace

// --- responses ---------------------------------------------------------------

SutResponse SutResponse::Ok(std::string tag) {
  return {ResponseStatus::kOk, tag, tag};
}

SutResponse SutResponse::Reject(std::string reason) {
  return {ResponseStatus::kReject, std::move(reason), std::nullopt};
}

SutResponse SutResponse::Err(std::string detail) {
  if (detail.empty()) detail = "unspecified";
  return {ResponseStatus::kErr, std::move(detail), std::nullopt};
}

std::string SutResponse::to_wire() const {
  switch (status) {
    case ResponseStatus::kOk:
      return "OK " + detail;
    case ResponseStatus::kReject:
      return "REJECT " + detail;
    case ResponseStatus::kErr:
      return "ERR " + detail;
  }
  return "ERR " + detail;
}

SutResponse SutResponse::parse(std::string_view line) {
  auto sp = line.find(' ');
  std::string_view word = line.substr(0, sp);
  std::string rest =
      sp == std::string_view::npos ? "" : std::string(trim(line.substr(sp + 1)));
  if (word == "OK" && !rest.empty() &&
      rest.find(' ') == std::string::npos) {
    return Ok(rest);
  }
  if (word == "REJECT" && !rest.empty() &&
      rest.find(' ') == std::string::npos) {
    return Reject(rest);
  }
  if (word == "ERR" && !rest.empty()) return Err(rest);
  throw AdapterFailure("malformed response line '" + std::string(line) + "'");
}

// --- state machine -----------------------------------------------------------

std::string_view to_string(OrderStage s) {
  switch (s) {
    case OrderStage::kInit:
      return "init";
    case OrderStage::kOrderTypeSet:
      return "order_type_set";
    case OrderStage::kAwaitAccount:
      return "await_account";
    case OrderStage::kAwaitTan:
      return "await_tan";
    case OrderStage::kCommitted:
      return "committed";
    case OrderStage::kAborted:
      return "aborted";
  }
  return "init";
}

std::pair<ServerState, SutResponse> reference_sut_step(
    const ServerState& state, const MessageEvent& event) {
  return Step(SutVariant::kReference, state, event);
}

std::string_view to_string(SutVariant v) {
  switch (v) {
    case SutVariant::kReference:
      return "reference";
    case SutVariant::kV1:
      return "v1";
    case SutVariant::kV2:
      return "v2";
  }
  return "reference";
}

std::optional<SutVariant> sut_variant_from_string(std::string_view s) {
  if (s == "reference") return SutVariant::kReference;
  if (s == "v1") return SutVariant::kV1;
  if (s == "v2") return SutVariant::kV2;
  return std::nullopt;
}

std::pair<ServerState, SutResponse> sut_step(SutVariant variant,
                                             const ServerState& state,
                                             const MessageEvent& event) {
  return Step(variant, state, event);
}

SutResponse InProcessAdapter::stimulate(const MessageEvent& event) {
  auto [next, resp] = Step(variant_, state_, event);
  state_ = next;
  return resp;
}

// --- wire ----------------------------------------------------------------------

std::string encode_request(const MessageEvent& event) {
  std::string s = "MSG " + event.signature;
  for (const EventArg& a : event.args) {
    s += " " + a.name + "=" + percent_encode(a.value.value_or(""));
  }
  return s;
}

MessageEvent decode_request(std::string_view line) {
  std::vector<std::string> w = split_whitespace(line);
  if (w.size() < 2 || w[0] != "MSG") {
    throw AdapterFailure("malformed request '" + std::string(line) + "'");
  }
  MessageEvent ev;
  ev.signature = w[1];
  for (std::size_t i = 2; i < w.size(); ++i) {
    auto eq = w[i].find('=');
    if (eq == std::string::npos || eq == 0) {
      throw AdapterFailure("malformed argument '" + w[i] + "'");
    }
    EventArg a;
    a.name = w[i].substr(0, eq);
    a.value = percent_decode(w[i].substr(eq + 1));
    ev.args.push_back(std::move(a));
  }
  return ev;
}

std::string serve_line(SutVariant variant, ServerState& state,
                       std::string_view line, bool& bye) {
  std::string_view l = trim(line);
  if (l == "RESET") {
    state = {};
    return SutResponse::Ok(std::string(to_string(state.stage))).to_wire();
  }
  if (l == "BYE") {
    bye = true;
    return "OK bye";
  }
  MessageEvent ev;
  try {
    ev = decode_request(l);
  } catch (const AdapterFailure& e) {
    return SutResponse::Err(e.what()).to_wire();
  }
  auto [next, resp] = Step(variant, state, ev);
  state = next;
  return resp.to_wire();
}

void serve_stream(SutVariant variant, int in_fd, int out_fd) {
  IgnoreSigpipe();
  LineChannel ch(in_fd, out_fd, 24 * 3600 * 1000);
  ServerState state;
  for (;;) {
    std::string line;
    try {
      line = ch.Receive();
    } catch (const AdapterFailure&) {
      return;
    }
    bool bye = false;
    std::string reply = serve_line(variant, state, line, bye);
    try {
      ch.Send(reply);
    } catch (const AdapterFailure&) {
      return;
    }
    if (bye) return;
  }
}

TcpServer::TcpServer(SutVariant variant, std::uint16_t port,
                     const std::string& host)
    : variant_(variant) {
  IgnoreSigpipe();
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw AdapterFailure("cannot create socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw AdapterFailure("bad listen address " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
      ::listen(listen_fd_, 16) < 0) {
    std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw AdapterFailure("cannot listen on " + host + ":" +
                         std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

TcpServer::~TcpServer() {
  stop();
  if (acceptor_.joinable()) acceptor_.join();
}

void TcpServer::stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
}

void TcpServer::wait() {
  if (acceptor_.joinable()) acceptor_.join();
}

void TcpServer::AcceptLoop() {
  std::vector<std::thread> sessions;
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    int r = ::poll(&p, 1, 100);
    if (r <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    sessions.emplace_back([this, fd] {
      serve_stream(variant_, fd, fd);
      ::close(fd);
    });
  }
  for (std::thread& t : sessions) t.join();
  ::close(listen_fd_);
}

std::unique_ptr<SutAdapter> connect_tcp(const std::string& host,
                                        std::uint16_t port, int timeout_ms) {
  IgnoreSigpipe();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string svc = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), svc.c_str(), &hints, &res); rc != 0) {
    throw AdapterFailure("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* a = res; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw AdapterFailure("cannot connect to " + host + ":" + svc);
  }
  return std::make_unique<StreamAdapter>(fd, fd, timeout_ms, -1);
}

std::unique_ptr<SutAdapter> spawn_stdio(const std::string& command,
                                        int timeout_ms) {
  IgnoreSigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) < 0) throw AdapterFailure("pipe failed");
  if (::pipe(from_child) < 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw AdapterFailure("pipe failed");
  }
  pid_t pid = ::fork();
  if (pid < 0) throw AdapterFailure("fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
  return std::make_unique<StreamAdapter>(from_child[0], to_child[1], timeout_ms,
                                         pid);
}

AdapterFactory make_adapter_factory(const std::string& spec, int timeout_ms) {
  if (starts_with(spec, "builtin:")) {
    auto v = sut_variant_from_string(spec.substr(8));
    if (!v) throw ConfigError("unknown builtin SUT '" + spec + "'");
    SutVariant variant = *v;
    return [variant] { return std::make_unique<InProcessAdapter>(variant); };
  }
  if (starts_with(spec, "tcp:")) {
    std::string rest = spec.substr(4);
    auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw ConfigError("adapter '" + spec + "' needs tcp:<host>:<port>");
    }
    std::string host = rest.substr(0, colon);
    int port = 0;
    try {
      port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      port = -1;
    }
    if (port <= 0 || port > 65535) {
      throw ConfigError("bad port in adapter '" + spec + "'");
    }
    return [host, port, timeout_ms] {
      return connect_tcp(host, static_cast<std::uint16_t>(port), timeout_ms);
    };
  }
  if (starts_with(spec, "stdio:") && spec.size() > 6) {
    std::string command = spec.substr(6);
    return [command, timeout_ms] { return spawn_stdio(command, timeout_ms); };
  }
  throw ConfigError("unknown adapter '" + spec +
                    "' (builtin:reference|v1|v2, tcp:<host>:<port>, "
                    "stdio:<command>)");
}

// --- verdicts --------------------------------------------------------------------

Verdict run_trace(SutAdapter& adapter, const Trace& trace,
                  const OracleConfig& oracle, std::vector<Exchange>* log,
                  bool* transport_failure) {
  if (transport_failure) *transport_failure = false;
  const bool baseline = trace.is_baseline();
  std::optional<SutResponse> last;
  ServerState ref;
  std::optional<std::size_t> accepted_invalid;
  std::string accepted_why;
  std::optional<std::size_t> mismatch;
  std::string mismatch_why;
  try {
    adapter.reset();
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      const MessageEvent& ev = trace.events[i];
      if (ev.direction == Direction::kFromSut) {
        if (baseline && !mismatch && (!last || !Matches(*last, ev.signature))) {
          mismatch = i;
          mismatch_why = "expected '" + ev.signature + "' but saw " +
                         (last ? "'" + last->to_wire() + "'" : "nothing");
        }
        continue;
      }
      SutResponse resp = adapter.stimulate(ev);
      if (log) log->push_back({i, encode_request(ev), resp.to_wire()});
      last = resp;
      if (baseline) {
        if (resp.status == ResponseStatus::kErr) {
          return Make(VerdictKind::kError,
                      "SUT error on conforming trace: " + resp.to_wire(), i);
        }
        if (resp.status == ResponseStatus::kReject && !Expected(trace, i, resp) &&
            !mismatch) {
          mismatch = i;
          mismatch_why = "conforming stimulus rejected: " + resp.to_wire();
        }
        continue;
      }
      auto [next_ref, ref_resp] = reference_sut_step(ref, ev);
      ref = next_ref;
      if (resp.status == ResponseStatus::kErr) {
        return Make(VerdictKind::kInconclusive,
                    "SUT error: " + resp.to_wire(), i);
      }
      if (resp.status == ResponseStatus::kOk &&
          oracle.protected_tags.count(resp.detail) &&
          !(ref_resp == resp)) {
        return Make(VerdictKind::kVuln,
                    "reached '" + resp.detail +
                        "' where the reference answers '" +
                        ref_resp.to_wire() + "'",
                    i);
      }
      const bool sut_rejects =
          resp.status == ResponseStatus::kReject && !Expected(trace, i, resp);
      if (!accepted_invalid) {
        if (sut_rejects) {
          return Make(VerdictKind::kPass,
                      "rejected at event " + std::to_string(i) + ": " +
                          resp.to_wire());
        }
        if (ref_resp.status == ResponseStatus::kReject &&
            !Expected(trace, i, ref_resp) &&
            resp.status != ResponseStatus::kReject) {
          accepted_invalid = i;
          accepted_why = "accepted invalid sequence: answered '" +
                         resp.to_wire() + "' where the reference answers '" +
                         ref_resp.to_wire() + "'";
        }
      } else if (sut_rejects) {
        return Make(VerdictKind::kInconclusive,
                    "late rejection at event " + std::to_string(i) +
                        " after accepting event " +
                        std::to_string(*accepted_invalid),
                    i);
      }
    }
  } catch (const AdapterFailure& e) {
    if (transport_failure) *transport_failure = true;
    return Make(VerdictKind::kError, std::string("transport: ") + e.what());
  }
  if (baseline) {
    if (mismatch) return Make(VerdictKind::kError, mismatch_why, mismatch);
    if (last && last->status != ResponseStatus::kOk) {
      return Make(VerdictKind::kError,
                  "conforming trace ended with " + last->to_wire());
    }
    return Make(VerdictKind::kPass, "conforms");
  }
  if (accepted_invalid) {
    return Make(VerdictKind::kVuln, accepted_why, accepted_invalid);
  }
  return Make(VerdictKind::kPass, "no invalid step accepted");
}

bool vuln_is_sound(const TraceResult& result, const OracleConfig& oracle) {
  if (result.verdict.kind != VerdictKind::kVuln || !result.verdict.event_index) {
    return false;
  }
  ServerState ref;
  for (const Exchange& x : result.log) {
    MessageEvent ev;
    SutResponse got;
    try {
      ev = decode_request(x.request);
      got = SutResponse::parse(x.response);
    } catch (const AdapterFailure&) {
      return false;
    }
    auto [next, ref_resp] = reference_sut_step(ref, ev);
    ref = next;
    if (x.event_index == *result.verdict.event_index) {
      return got.status == ResponseStatus::kOk && !(got == ref_resp) &&
             (oracle.protected_tags.count(got.detail) != 0 ||
              ref_resp.status == ResponseStatus::kReject);
    }
  }
  return false;
}

RunReport run_campaign(const std::vector<Trace>& traces,
                       const AdapterFactory& factory,
                       const CampaignConfig& cfg) {
  if (traces.empty()) throw ConfigError("campaign has no traces to run");
  auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.campaign_id = cfg.campaign_id;
  report.adapter = cfg.adapter_spec;
  std::vector<std::optional<TraceResult>> slots(traces.size());
  std::vector<char> failed(traces.size(), 0);

  auto run_one = [&](SutAdapter& adapter, std::size_t i) {
    TraceResult r;
    r.trace_id = traces[i].trace_id;
    r.origin = traces[i].origin;
    bool tf = false;
    r.verdict = run_trace(adapter, traces[i], cfg.oracle, &r.log, &tf);
    failed[i] = tf;
    slots[i] = std::move(r);
  };

  const std::size_t workers =
      cfg.stop_on_vuln ? 1
                       : std::min<std::size_t>(
                             static_cast<std::size_t>(std::max(1, cfg.workers)),
                             traces.size());
  if (workers == 1) {
    std::unique_ptr<SutAdapter> adapter = factory();
    for (std::size_t i = 0; i < traces.size(); ++i) {
      run_one(*adapter, i);
      if (cfg.stop_on_vuln && slots[i]->verdict.kind == VerdictKind::kVuln) {
        report.stopped_early = i + 1 < traces.size();
        break;
      }
    }
    adapter->close();
  } else {
    std::vector<std::unique_ptr<SutAdapter>> adapters;
    for (std::size_t w = 0; w < workers; ++w) adapters.push_back(factory());
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t i = w; i < traces.size(); i += workers) {
          run_one(*adapters[w], i);
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (auto& a : adapters) a->close();
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) continue;
    report.transport_failures += failed[i];
    report.results.push_back(std::move(*slots[i]));
  }
  report.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return report;
}

}  // namespace mbst
