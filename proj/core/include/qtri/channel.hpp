// Copyright 2026 The qtri Authors
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

#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qtri/protocol.hpp"
#include "qtri/strategies.hpp"

namespace qtri {

// ---------------------------------------------------------------------------
// Messages and framing
//
// Frame = 4-byte big-endian payload length + canonical JSON payload (sorted
// keys, no whitespace, doubles as %.17g). Payload type tags: "hello",
// "outcomes", "estimate", "error", "bye".
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxFrameBytes = std::size_t{1} << 20;
inline constexpr std::size_t kMaxOutcomeBatch = 1024;

enum class Role { Alice, Bob };

struct Hello {
    Role role = Role::Alice;
    std::size_t n_particles = 0;
    bool operator==(const Hello &) const = default;
};

struct Outcomes {
    std::size_t seq = 0;
    std::vector<int> outcomes;  // each +1 or -1, at most kMaxOutcomeBatch
    bool operator==(const Outcomes &) const = default;
};

struct EstimateMessage {
    double x = 0.0, y = 0.0, z = 1.0;  // unit-norm within 1e-9
    std::string strategy;
    bool operator==(const EstimateMessage &) const = default;
};

/// Codes carried by ProtocolErrorMessage.
enum class ProtocolErrorCode : std::uint32_t {
    UnexpectedMessage = 1,
    OutOfOrder = 2,
    Unsupported = 3,
    Malformed = 4,
    Internal = 5,
};

struct ProtocolErrorMessage {
    std::uint32_t code = 0;
    std::string detail;
    bool operator==(const ProtocolErrorMessage &) const = default;
};

struct Bye {
    bool operator==(const Bye &) const = default;
};

using Message = std::variant<Hello, Outcomes, EstimateMessage, ProtocolErrorMessage, Bye>;

/// Header + payload. Throws Input for an invalid message, SizeLimit if the
/// payload exceeds kMaxFrameBytes.
std::string encode_frame(const Message &msg);

/// Decodes the frame at the start of `bytes`; `consumed` receives its total
/// length. Throws Truncation, SizeLimit (checked from the header alone),
/// Parse for bad JSON or fields, Protocol for an unknown type tag.
Message decode_frame(std::string_view bytes, std::size_t *consumed = nullptr);

// ---------------------------------------------------------------------------
// Transports
// ---------------------------------------------------------------------------

/// Reliable ordered byte stream.
class Transport {
   public:
    virtual ~Transport() = default;
    virtual void send(std::string_view bytes) = 0;
    /// Reads exactly `n` bytes. Throws Truncation if the stream ends first.
    virtual std::string recv_exact(std::size_t n) = 0;
    /// Ends the outgoing direction; the peer sees end-of-stream.
    virtual void close() = 0;
};

void write_frame(Transport &t, const Message &msg);
Message read_frame(Transport &t);

/// Two connected in-process endpoints.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_pipe();

/// Passes everything through and keeps a copy of the bytes sent and
/// received.
class RecordingTransport : public Transport {
   public:
    explicit RecordingTransport(Transport &inner) : inner_(inner) {}

    void send(std::string_view bytes) override;
    std::string recv_exact(std::size_t n) override;
    void close() override { inner_.close(); }

    const std::string &sent() const { return sent_; }
    const std::string &received() const { return received_; }

   private:
    Transport &inner_;
    std::string sent_;
    std::string received_;
};

class TcpTransport : public Transport {
   public:
    explicit TcpTransport(int fd) : fd_(fd) {}
    ~TcpTransport() override;
    TcpTransport(const TcpTransport &) = delete;
    TcpTransport &operator=(const TcpTransport &) = delete;

    void send(std::string_view bytes) override;
    std::string recv_exact(std::size_t n) override;
    void close() override;

   private:
    int fd_ = -1;
    bool write_closed_ = false;
};

/// Throws Io when the host cannot be resolved or the connection fails.
std::unique_ptr<TcpTransport> tcp_connect(const std::string &host, std::uint16_t port);

class TcpListener {
   public:
    /// Binds `host:port`; port 0 picks an ephemeral port.
    TcpListener(const std::string &host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener &) = delete;
    TcpListener &operator=(const TcpListener &) = delete;

    std::uint16_t port() const { return port_; }
    std::unique_ptr<TcpTransport> accept();

   private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

inline constexpr std::uint16_t kDefaultPort = 7070;

// ---------------------------------------------------------------------------
// Endpoints
//
// Alice: Hello -> (Bob's Hello) -> Outcomes* -> (Estimate) -> Bye -> (Bye)
// Bob mirrors it. Any violation sends a ProtocolErrorMessage to the peer,
// closes, and throws Error(Protocol).
// ---------------------------------------------------------------------------

/// Alice's outcomes come from Rng(config.seed). The returned transcript
/// carries Bob's estimate and the truth (referee-only).
Transcript alice_endpoint(const GroundTruth &truth, const ProtocolConfig &config, Transport &transport);

struct BobOptions {
    std::uint64_t seed = 0;  // drives Bob's measurement randomness
    std::optional<Direction> hemisphere_hint;
};

/// `particles` is the physical source of Bob's qubits; his code only reaches
/// it through ParticleBox measurements.
Transcript bob_endpoint(const StrategyContext &strategy, const GroundTruth &particles, const BobOptions &options,
                        Transport &transport);

/// The same protocol with no channel: Alice's Rng(config.seed), Bob's
/// Rng(bob_seed). Sessions over any transport reproduce this transcript.
Transcript simulate_session(const GroundTruth &truth, const ProtocolConfig &config, const StrategyContext &strategy,
                            std::uint64_t bob_seed);

}  // namespace qtri
