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

#include "qtri/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "qtri/error.hpp"
#include "qtri/json_io.hpp"

namespace qtri {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

nlohmann::json message_json(const Message &msg) {
    return std::visit(
        overloaded{
            [](const Hello &m) -> nlohmann::json {
                return {{"type", "hello"}, {"role", m.role == Role::Alice ? "alice" : "bob"}, {"n", m.n_particles}};
            },
            [](const Outcomes &m) -> nlohmann::json {
                if (m.outcomes.size() > kMaxOutcomeBatch) {
                    throw Error(ErrorKind::Input, "outcome batch exceeds " + std::to_string(kMaxOutcomeBatch));
                }
                for (int v : m.outcomes) {
                    if (v != 1 && v != -1) throw Error(ErrorKind::Input, "outcomes must be +1 or -1");
                }
                return {{"type", "outcomes"}, {"seq", m.seq}, {"outcomes", m.outcomes}};
            },
            [](const EstimateMessage &m) -> nlohmann::json {
                if (std::abs(std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z) - 1.0) > 1e-9) {
                    throw Error(ErrorKind::Input, "estimate direction is not unit-norm");
                }
                return {{"type", "estimate"}, {"x", m.x}, {"y", m.y}, {"z", m.z}, {"strategy", m.strategy}};
            },
            [](const ProtocolErrorMessage &m) -> nlohmann::json {
                return {{"type", "error"}, {"code", m.code}, {"detail", m.detail}};
            },
            [](const Bye &) -> nlohmann::json { return {{"type", "bye"}}; },
        },
        msg);
}

Message message_from_json(const nlohmann::json &j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "hello") {
        const std::string role = j.at("role").get<std::string>();
        if (role != "alice" && role != "bob") throw Error(ErrorKind::Parse, "hello role must be alice or bob");
        return Hello{role == "alice" ? Role::Alice : Role::Bob, j.at("n").get<std::size_t>()};
    }
    if (type == "outcomes") {
        Outcomes m{j.at("seq").get<std::size_t>(), j.at("outcomes").get<std::vector<int>>()};
        if (m.outcomes.size() > kMaxOutcomeBatch) throw Error(ErrorKind::Parse, "outcome batch too large");
        for (int v : m.outcomes) {
            if (v != 1 && v != -1) throw Error(ErrorKind::Parse, "outcomes must be +1 or -1");
        }
        return m;
    }
    if (type == "estimate") {
        EstimateMessage m{j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>(),
                          j.at("strategy").get<std::string>()};
        if (std::abs(std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z) - 1.0) > 1e-9) {
            throw Error(ErrorKind::Parse, "estimate direction is not unit-norm");
        }
        return m;
    }
    if (type == "error") return ProtocolErrorMessage{j.at("code").get<std::uint32_t>(), j.at("detail").get<std::string>()};
    if (type == "bye") return Bye{};
    throw Error(ErrorKind::Protocol, "unknown message type '" + type + "'");
}

std::size_t read_length(std::string_view header) {
    std::size_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | static_cast<unsigned char>(header[i]);
    if (len > kMaxFrameBytes) {
        throw Error(ErrorKind::SizeLimit, "frame declares " + std::to_string(len) + " bytes, over the 1 MiB cap");
    }
    return len;
}

Message parse_payload(std::string_view payload) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(payload);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("frame payload is not valid JSON: ") + e.what());
    }
    try {
        return message_from_json(j);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("frame payload has bad fields: ") + e.what());
    }
}

// ----- in-process pipe -----------------------------------------------------

struct PipeBuffer {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<char> bytes;
    bool closed = false;
};

class PipeTransport : public Transport {
   public:
    PipeTransport(std::shared_ptr<PipeBuffer> in, std::shared_ptr<PipeBuffer> out)
        : in_(std::move(in)), out_(std::move(out)) {}
    ~PipeTransport() override { close(); }

    void send(std::string_view bytes) override {
        {
            std::lock_guard lock(out_->mutex);
            if (out_->closed) throw Error(ErrorKind::Io, "pipe: send after close");
            out_->bytes.insert(out_->bytes.end(), bytes.begin(), bytes.end());
        }
        out_->ready.notify_all();
    }

    std::string recv_exact(std::size_t n) override {
        std::unique_lock lock(in_->mutex);
        in_->ready.wait(lock, [&] { return in_->bytes.size() >= n || in_->closed; });
        if (in_->bytes.size() < n) throw Error(ErrorKind::Truncation, "pipe closed mid-frame");
        std::string out(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
        in_->bytes.erase(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
        return out;
    }

    void close() override {
        {
            std::lock_guard lock(out_->mutex);
            out_->closed = true;
        }
        out_->ready.notify_all();
    }

   private:
    std::shared_ptr<PipeBuffer> in_;
    std::shared_ptr<PipeBuffer> out_;
};

// ----- session helpers -----------------------------------------------------

[[noreturn]] void abort_session(Transport &t, ProtocolErrorCode code, const std::string &detail) {
    try {
        write_frame(t, ProtocolErrorMessage{static_cast<std::uint32_t>(code), detail});
        t.close();
    } catch (const std::exception &) {
        // The peer may already be gone; the local error below is what matters.
    }
    throw Error(ErrorKind::Protocol, detail);
}

// Reads one frame; peer errors and undecodable frames end the session.
Message expect_frame(Transport &t) {
    Message msg;
    try {
        msg = read_frame(t);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::Protocol || e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::SizeLimit) {
            abort_session(t, e.kind() == ErrorKind::Protocol ? ProtocolErrorCode::UnexpectedMessage
                                                             : ProtocolErrorCode::Malformed,
                          e.what());
        }
        throw Error(ErrorKind::Protocol, std::string("transport failure: ") + e.what());
    }
    if (const auto *err = std::get_if<ProtocolErrorMessage>(&msg)) {
        throw Error(ErrorKind::Protocol, "peer reported error " + std::to_string(err->code) + ": " + err->detail);
    }
    return msg;
}

template <class T>
T expect(Transport &t, const char *what) {
    Message msg = expect_frame(t);
    if (auto *m = std::get_if<T>(&msg)) return std::move(*m);
    abort_session(t, ProtocolErrorCode::UnexpectedMessage, std::string("expected ") + what);
}

void send_or_fail(Transport &t, const Message &msg) {
    try {
        write_frame(t, msg);
    } catch (const Error &e) {
        throw Error(ErrorKind::Protocol, std::string("transport failure: ") + e.what());
    }
}

}  // namespace

std::string encode_frame(const Message &msg) {
    const std::string payload = canonical_dump(message_json(msg));
    if (payload.size() > kMaxFrameBytes) throw Error(ErrorKind::SizeLimit, "frame payload exceeds 1 MiB");
    const auto len = static_cast<std::uint32_t>(payload.size());
    std::string out;
    out.reserve(4 + payload.size());
    out.push_back(static_cast<char>((len >> 24) & 0xFF));
    out.push_back(static_cast<char>((len >> 16) & 0xFF));
    out.push_back(static_cast<char>((len >> 8) & 0xFF));
    out.push_back(static_cast<char>(len & 0xFF));
    out += payload;
    return out;
}

Message decode_frame(std::string_view bytes, std::size_t *consumed) {
    if (bytes.size() < 4) throw Error(ErrorKind::Truncation, "frame header needs 4 bytes");
    const std::size_t len = read_length(bytes.substr(0, 4));
    if (bytes.size() < 4 + len) throw Error(ErrorKind::Truncation, "frame payload is truncated");
    Message msg = parse_payload(bytes.substr(4, len));
    if (consumed) *consumed = 4 + len;
    return msg;
}

void write_frame(Transport &t, const Message &msg) { t.send(encode_frame(msg)); }

Message read_frame(Transport &t) {
    const std::string header = t.recv_exact(4);
    const std::size_t len = read_length(header);
    return parse_payload(t.recv_exact(len));
}

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_pipe() {
    auto a_to_b = std::make_shared<PipeBuffer>();
    auto b_to_a = std::make_shared<PipeBuffer>();
    return {std::make_unique<PipeTransport>(b_to_a, a_to_b), std::make_unique<PipeTransport>(a_to_b, b_to_a)};
}

void RecordingTransport::send(std::string_view bytes) {
    inner_.send(bytes);
    sent_.append(bytes);
}

std::string RecordingTransport::recv_exact(std::size_t n) {
    std::string out = inner_.recv_exact(n);
    received_ += out;
    return out;
}

// ----- TCP -----------------------------------------------------------------

TcpTransport::~TcpTransport() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpTransport::send(std::string_view bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorKind::Io, std::string("tcp send: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::string TcpTransport::recv_exact(std::size_t n) {
    std::string out(n, '\0');
    std::size_t got = 0;
    while (got < n) {
        const ssize_t r = ::recv(fd_, out.data() + got, n - got, 0);
        if (r < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorKind::Io, std::string("tcp recv: ") + std::strerror(errno));
        }
        if (r == 0) throw Error(ErrorKind::Truncation, "connection closed mid-frame");
        got += static_cast<std::size_t>(r);
    }
    return out;
}

void TcpTransport::close() {
    if (fd_ >= 0 && !write_closed_) {
        ::shutdown(fd_, SHUT_WR);
        write_closed_ = true;
    }
}

std::unique_ptr<TcpTransport> tcp_connect(const std::string &host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo *found = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
        throw Error(ErrorKind::Io, "cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(found, &::freeaddrinfo);
    for (addrinfo *ai = found; ai; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return std::make_unique<TcpTransport>(fd);
        }
        ::close(fd);
    }
    throw Error(ErrorKind::Io, "cannot connect to " + host + ":" + service);
}

TcpListener::TcpListener(const std::string &host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(ErrorKind::Io, std::string("socket: ") + std::strerror(errno));
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw Error(ErrorKind::Io, "listen address must be an IPv4 literal, got " + host);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr *>(&addr), sizeof addr) != 0 || ::listen(fd_, 16) != 0) {
        const std::string reason = std::strerror(errno);
        ::close(fd_);
        throw Error(ErrorKind::Io, "cannot listen on " + host + ":" + std::to_string(port) + ": " + reason);
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr *>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpTransport> TcpListener::accept() {
    for (;;) {
        const int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return std::make_unique<TcpTransport>(fd);
        }
        if (errno != EINTR) throw Error(ErrorKind::Io, std::string("accept: ") + std::strerror(errno));
    }
}

// ----- endpoints -----------------------------------------------------------

Transcript alice_endpoint(const GroundTruth &truth, const ProtocolConfig &config, Transport &transport) {
    Rng rng(config.seed);
    Transcript transcript{config, alice_measure(truth, config, rng), std::nullopt, truth};

    send_or_fail(transport, Hello{Role::Alice, config.n_particles});
    const Hello reply = expect<Hello>(transport, "hello from bob");
    if (reply.role != Role::Bob || reply.n_particles != config.n_particles) {
        abort_session(transport, ProtocolErrorCode::UnexpectedMessage, "bob's hello does not match the session");
    }

    std::size_t seq = 0;
    for (std::size_t start = 0; start < transcript.outcomes.size(); start += kMaxOutcomeBatch, ++seq) {
        Outcomes batch{seq, {}};
        const std::size_t end = std::min(start + kMaxOutcomeBatch, transcript.outcomes.size());
        for (std::size_t i = start; i < end; ++i) batch.outcomes.push_back(transcript.outcomes[i].alice_outcome);
        send_or_fail(transport, batch);
    }

    const EstimateMessage estimate = expect<EstimateMessage>(transport, "estimate");
    transcript.estimate = Estimate{Direction::unit(estimate.x, estimate.y, estimate.z), estimate.strategy};
    send_or_fail(transport, Bye{});
    expect<Bye>(transport, "bye");
    transport.close();
    return transcript;
}

Transcript bob_endpoint(const StrategyContext &strategy, const GroundTruth &particles, const BobOptions &options,
                        Transport &transport) {
    const Hello hello = expect<Hello>(transport, "hello from alice");
    if (hello.role != Role::Alice) abort_session(transport, ProtocolErrorCode::UnexpectedMessage, "expected alice");
    const std::size_t n = hello.n_particles;
    if (strategy.strategy() == Strategy::Collective && n > kMaxCollectiveQubits) {
        abort_session(transport, ProtocolErrorCode::Unsupported,
                      "collective strategy supports at most " + std::to_string(kMaxCollectiveQubits) + " qubits");
    }
    send_or_fail(transport, Hello{Role::Bob, n});

    Transcript transcript{ProtocolConfig{n, options.seed, options.hemisphere_hint}, {}, std::nullopt, std::nullopt};
    std::size_t expected_seq = 0;
    while (transcript.outcomes.size() < n) {
        const Outcomes batch = expect<Outcomes>(transport, "outcomes");
        if (batch.seq != expected_seq) {
            abort_session(transport, ProtocolErrorCode::OutOfOrder,
                          "outcome batch " + std::to_string(batch.seq) + " arrived, expected " +
                              std::to_string(expected_seq));
        }
        if (transcript.outcomes.size() + batch.outcomes.size() > n) {
            abort_session(transport, ProtocolErrorCode::UnexpectedMessage, "more outcomes than announced");
        }
        for (int v : batch.outcomes) transcript.outcomes.push_back({transcript.outcomes.size(), v});
        ++expected_seq;
    }

    Rng rng(options.seed);
    const ParticleBox box(particles, transcript.outcomes);
    Estimate estimate;
    try {
        estimate = strategy.estimate(box, rng);
    } catch (const Error &e) {
        abort_session(transport, ProtocolErrorCode::Internal, e.what());
    }
    transcript.estimate = estimate;
    send_or_fail(transport, EstimateMessage{estimate.direction.x(), estimate.direction.y(), estimate.direction.z(),
                                            estimate.strategy});
    expect<Bye>(transport, "bye");
    send_or_fail(transport, Bye{});
    transport.close();
    return transcript;
}

Transcript simulate_session(const GroundTruth &truth, const ProtocolConfig &config, const StrategyContext &strategy,
                            std::uint64_t bob_seed) {
    Rng alice_rng(config.seed);
    Transcript transcript{config, alice_measure(truth, config, alice_rng), std::nullopt, truth};
    Rng bob_rng(bob_seed);
    transcript.estimate = strategy.estimate(ParticleBox(truth, transcript.outcomes), bob_rng);
    return transcript;
}

}  // namespace qtri
