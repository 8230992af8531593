// Copyright 2026 The Atlas Authors
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

#include <gtest/gtest.h>

#include <sys/socket.h>
#include <unistd.h>

#include <limits>
#include <set>
#include <thread>

#include "atlas/core/error.hpp"
#include "atlas/wire/channel.hpp"
#include "atlas/wire/handshake.hpp"
#include "atlas/wire/kdf.hpp"
#include "atlas/wire/pairing.hpp"
#include "fixtures.hpp"

using namespace atlas;
using namespace atlas::wire;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an atlas::Error";
  return ErrorCode::io_error;
}

Bytes hex(std::string_view h) {
  auto s = from_hex_string(h);
  return Bytes(s.begin(), s.end());
}

NodeId node(std::uint8_t n) {
  NodeId id{};
  id.fill(n);
  return id;
}

struct Pair {
  SessionKeys a;
  SessionKeys b;
};

Pair fresh_pair() {
  PskClient client(node(1), Key32{1, 2, 3});
  PskServer server(node(2), Key32{1, 2, 3});
  auto s = psk_session(client, server, 1000);
  return {s.client, s.server};
}

}  // namespace

TEST(CryptoTest, HmacSha256KnownAnswer) {
  auto mac = hmac_sha256(as_bytes("Jefe"), as_bytes("what do ya want for nothing?"));
  EXPECT_EQ(to_hex(mac), "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(CryptoTest, HkdfSha256KnownAnswer) {
  Bytes ikm(22, 0x0b);
  auto okm = hkdf_sha256(ikm, hex("000102030405060708090a0b0c"), hex("f0f1f2f3f4f5f6f7f8f9"), 42);
  EXPECT_EQ(to_hex(okm), "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865");
}

TEST(CryptoTest, AeadRoundTripAndTamper) {
  Key32 key{9};
  Nonce12 nonce{1};
  Tag16 tag{};
  const Bytes ad{1, 2, 3};
  auto ct = aead_encrypt(key, nonce, ad, as_bytes("hello"), tag);
  Bytes pt;
  ASSERT_TRUE(aead_decrypt(key, nonce, ad, ct, tag, pt));
  EXPECT_EQ(std::string(pt.begin(), pt.end()), "hello");
  ct[0] ^= 1;
  EXPECT_FALSE(aead_decrypt(key, nonce, ad, ct, tag, pt));
}

TEST(FrameTest, EncodeDecodeRoundTrip) {
  SecureFrame f;
  f.msg_type = MsgType::sample_batch;
  f.sender_id = node(7);
  f.nonce = make_nonce(0x80000001u, 42);
  f.ciphertext = {1, 2, 3, 4, 5};
  f.tag.fill(0xee);
  auto bytes = encode(f);
  ASSERT_EQ(bytes.size(), kFrameOverhead + 5);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "ATLS");
  EXPECT_EQ(bytes[4], kVersion);
  EXPECT_EQ(bytes[5], 0x10);
  EXPECT_EQ(decode(bytes), f);
  EXPECT_EQ(f.nonce_prefix(), 0x80000001u);
  EXPECT_EQ(f.nonce_counter(), 42u);
  EXPECT_EQ(encoded_size(bytes), bytes.size());
  EXPECT_FALSE(encoded_size(std::span(bytes).first(10)));
}

TEST(FrameTest, MalformedInputsRejected) {
  SecureFrame f;
  f.ciphertext = {1, 2, 3};
  auto good = encode(f);
  auto expect_malformed = [](Bytes b) { EXPECT_EQ(code_of([&] { decode(b); }), ErrorCode::malformed_frame); };
  expect_malformed({});
  expect_malformed(Bytes(good.begin(), good.end() - 1));
  auto extra = good;
  extra.push_back(0);
  expect_malformed(extra);
  auto magic = good;
  magic[0] = 'X';
  expect_malformed(magic);
  auto version = good;
  version[4] = 2;
  expect_malformed(version);
  auto type = good;
  type[5] = 0x7f;
  expect_malformed(type);
  EXPECT_FALSE(is_known_msg_type(0x00));
  EXPECT_TRUE(is_known_msg_type(0x13));
}

TEST(SessionTest, RoundTripsBothDirections) {
  auto p = fresh_pair();
  for (int i = 0; i < 100; ++i) {
    Bytes msg(static_cast<std::size_t>(i), static_cast<std::uint8_t>(i));
    auto f = seal(p.a, MsgType::control, msg);
    EXPECT_EQ(open(p.b, f).payload, msg);
    auto g = seal(p.b, MsgType::control, msg);
    EXPECT_EQ(open_bytes(p.a, encode(g)).payload, msg);
  }
  EXPECT_EQ(p.a.tx_counter(), 100u);
  EXPECT_EQ(p.b.rx_counter(), 100u);
}

TEST(SessionTest, DirectionsUseDistinctNoncePrefixes) {
  auto p = fresh_pair();
  auto f = seal(p.a, MsgType::control, as_bytes("x"));
  auto g = seal(p.b, MsgType::control, as_bytes("x"));
  EXPECT_NE(f.nonce_prefix(), g.nonce_prefix());
  EXPECT_EQ(f.nonce_prefix() >> 31, 0u);
  EXPECT_EQ(g.nonce_prefix() >> 31, 1u);
  // A frame cannot be reflected back to its sender.
  EXPECT_EQ(code_of([&] { open(p.a, f); }), ErrorCode::authentication_failure);
}

TEST(SessionTest, EverySingleBitFlipRejected) {
  auto p = fresh_pair();
  auto bytes = encode(seal(p.a, MsgType::sample_batch, as_bytes("samples: []")));
  for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
    auto copy = bytes;
    copy[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    auto rx = p.b;
    try {
      open_bytes(rx, copy);
      FAIL() << "bit " << bit << " accepted";
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::authentication_failure || e.code() == ErrorCode::malformed_frame)
          << "bit " << bit << ": " << to_string(e.code());
    }
  }
  EXPECT_EQ(open_bytes(p.b, bytes).payload.size(), 11u);
}

TEST(SessionTest, ReplayAndReorderRejected) {
  auto p = fresh_pair();
  auto f1 = seal(p.a, MsgType::control, as_bytes("one"));
  auto f2 = seal(p.a, MsgType::control, as_bytes("two"));
  open(p.b, f2);
  EXPECT_EQ(code_of([&] { open(p.b, f1); }), ErrorCode::replay_detected);
  EXPECT_EQ(code_of([&] { open(p.b, f2); }), ErrorCode::replay_detected);
}

TEST(SessionTest, ForgedCounterDoesNotPoisonReplayWindow) {
  auto p = fresh_pair();
  auto f = seal(p.a, MsgType::control, as_bytes("x"));
  auto forged = f;
  forged.nonce = make_nonce(f.nonce_prefix(), 1000);
  EXPECT_EQ(code_of([&] { open(p.b, forged); }), ErrorCode::authentication_failure);
  EXPECT_NO_THROW(open(p.b, f));
}

TEST(SessionTest, CounterExhaustionExpiresSession) {
  auto p = fresh_pair();
  p.a.set_tx_counter_for_testing(std::numeric_limits<std::uint64_t>::max() - 1);
  EXPECT_NO_THROW(seal(p.a, MsgType::control, as_bytes("last")));
  EXPECT_EQ(code_of([&] { seal(p.a, MsgType::control, as_bytes("over")); }), ErrorCode::session_expired);
}

TEST(SessionTest, WrongSessionCannotOpen) {
  auto p = fresh_pair();
  auto q = fresh_pair();
  auto f = seal(p.a, MsgType::control, as_bytes("x"));
  EXPECT_EQ(code_of([&] { open(q.b, f); }), ErrorCode::authentication_failure);
}

TEST(SessionTest, PlaintextSessionsAreMarked) {
  auto a = SessionKeys::plaintext_for_benchmark(node(1), node(2), Role::initiator, 0);
  auto b = SessionKeys::plaintext_for_benchmark(node(2), node(1), Role::responder, 0);
  EXPECT_EQ(a.protection(), Protection::plaintext);
  auto f = seal(a, MsgType::control, as_bytes("visible"));
  EXPECT_EQ(std::string(f.ciphertext.begin(), f.ciphertext.end()), "visible");
  EXPECT_EQ(open(b, f).payload.size(), 7u);
}

TEST(AtRestTest, RandomNoncesAndKeyCheck) {
  Key32 key{5};
  auto f1 = seal_at_rest(key, node(3), MsgType::location_report, as_bytes("records: []"));
  auto f2 = seal_at_rest(key, node(3), MsgType::location_report, as_bytes("records: []"));
  EXPECT_NE(f1.nonce, f2.nonce);
  EXPECT_NE(f1.ciphertext, f2.ciphertext);
  EXPECT_EQ(open_at_rest(key, f1).size(), 11u);
  EXPECT_EQ(code_of([&] { open_at_rest(Key32{6}, f1); }), ErrorCode::authentication_failure);
}

TEST(KdfTest, BindsEveryInput) {
  Key32 secret{1};
  std::array<std::uint8_t, 32> n1{1}, n2{2};
  auto base = derive_session_material(secret, n1, n2, "label", node(1), node(2));
  EXPECT_NE(base.key, derive_session_material(Key32{2}, n1, n2, "label", node(1), node(2)).key);
  EXPECT_NE(base.key, derive_session_material(secret, n2, n1, "label", node(1), node(2)).key);
  EXPECT_NE(base.key, derive_session_material(secret, n1, n2, "other", node(1), node(2)).key);
  EXPECT_NE(base.key, derive_session_material(secret, n1, n2, "label", node(2), node(1)).key);
  EXPECT_NE(base.key, base.mac_key);
}

TEST(PairingTest, QrPayloadRoundTrip) {
  auto s = PairingSecret::issue("site:north", 1234, std::vector<std::uint8_t>(16, 0xab));
  auto qr = s.to_qr_payload();
  EXPECT_EQ(qr.rfind("atlas-pair:1:site:north:1234:", 0), 0u);
  auto back = PairingSecret::from_qr_payload(qr);
  EXPECT_EQ(back.secret, s.secret);
  EXPECT_EQ(back.environment_id, "site:north");
  EXPECT_EQ(back.issued_at, 1234);
  EXPECT_EQ(back.salt, s.salt);
  for (const char* bad : {"", "atlas-pair:2:e:1:00:00", "nope:1:e:1:00:00", "atlas-pair:1:e:x:00:00",
                          "atlas-pair:1:e:1:0011:00"})
    EXPECT_EQ(code_of([&] { PairingSecret::from_qr_payload(bad); }), ErrorCode::parse_error) << bad;
}

TEST(PairingTest, BothSidesAgreeAndTalk) {
  auto secret = PairingSecret::issue("env", 1, std::vector<std::uint8_t>(16, 1));
  PairingDevice device(secret);
  PairingBeacon beacon(BeaconId::from_index(1), secret.secret);
  auto s = oob_pair(device, beacon, 10);
  EXPECT_EQ(s.device.key(), s.beacon.key());
  EXPECT_EQ(s.device.peer_id(), node_id(BeaconId::from_index(1)));
  auto f = seal(s.device, MsgType::control, as_bytes("hello"));
  EXPECT_EQ(open(s.beacon, f).payload.size(), 5u);
  auto g = seal(s.beacon, MsgType::control, as_bytes("echo"));
  EXPECT_EQ(open(s.device, g).payload.size(), 4u);
}

TEST(PairingTest, SecretNeverOnTheWire) {
  auto secret = PairingSecret::issue("env", 1, std::vector<std::uint8_t>(16, 1));
  PairingDevice device(secret);
  PairingBeacon beacon(BeaconId::from_index(1), secret.secret);
  auto req = device.request();
  auto acc = beacon.accept(req, 1);
  Wiretap tap;
  tap.record(encode(req));
  tap.record(encode(acc.reply));
  EXPECT_FALSE(tap.contains(secret.secret));
  EXPECT_FALSE(tap.contains(acc.session.key()));
}

TEST(PairingTest, WrongSecretRejected) {
  auto secret = PairingSecret::issue("env", 1, std::vector<std::uint8_t>(16, 1));
  PairingDevice device(secret);
  PairingBeacon stranger(BeaconId::from_index(1), Key32{7});
  EXPECT_EQ(code_of([&] { stranger.accept(device.request(), 1); }), ErrorCode::pairing_rejected);

  PairingBeacon honest(BeaconId::from_index(1), secret.secret);
  auto acc = honest.accept(device.request(), 1);
  acc.reply.tag[0] ^= 1;
  EXPECT_EQ(code_of([&] { device.complete(acc.reply, 1); }), ErrorCode::pairing_rejected);
}

TEST(PairingTest, ReplayedRequestRejected) {
  auto secret = PairingSecret::issue("env", 1, std::vector<std::uint8_t>(16, 1));
  PairingDevice device(secret);
  PairingBeacon beacon(BeaconId::from_index(1), secret.secret);
  auto req = device.request();
  beacon.accept(req, 1);
  EXPECT_EQ(code_of([&] { beacon.accept(req, 2); }), ErrorCode::pairing_rejected);
}

TEST(PairingTest, ReplyToOtherAttemptRejected) {
  auto secret = PairingSecret::issue("env", 1, std::vector<std::uint8_t>(16, 1));
  PairingDevice device(secret);
  PairingBeacon beacon(BeaconId::from_index(1), secret.secret);
  auto old = beacon.accept(device.request(), 1);
  device.request();
  EXPECT_EQ(code_of([&] { device.complete(old.reply, 2); }), ErrorCode::pairing_rejected);
}

TEST(PairingTest, EverySessionGetsAFreshKey) {
  auto secret = PairingSecret::issue("env", 1, std::vector<std::uint8_t>(16, 1));
  PairingBeacon beacon(BeaconId::from_index(1), secret.secret);
  std::set<Key32> keys;
  std::set<NodeId> ids;
  for (int i = 0; i < 100; ++i) {
    PairingDevice device(secret);
    auto s = oob_pair(device, beacon, i + 1);
    keys.insert(s.device.key());
    ids.insert(device.session_id());
  }
  EXPECT_EQ(keys.size(), 100u);
  EXPECT_EQ(ids.size(), 100u);
}

TEST(HandshakeTest, AgreesOnKey) {
  auto p = fresh_pair();
  EXPECT_EQ(p.a.key(), p.b.key());
  EXPECT_EQ(p.a.role(), Role::initiator);
  EXPECT_EQ(p.b.role(), Role::responder);
}

TEST(HandshakeTest, PskMismatchFails) {
  PskClient client(node(1), Key32{1});
  PskServer server(node(2), Key32{2});
  EXPECT_EQ(code_of([&] { server.accept(client.hello(0), 0); }), ErrorCode::handshake_failed);

  // The server accepts its own psk; a client with another one rejects the reply.
  PskServer real(node(2), Key32{1});
  PskClient impostor(node(1), Key32{2});
  auto hello = client.hello(0);
  auto acc = real.accept(hello, 0);
  EXPECT_EQ(code_of([&] { impostor.finish(acc.reply, 0); }), ErrorCode::handshake_failed);
}

TEST(HandshakeTest, LateReplyTimesOut) {
  PskClient client(node(1), Key32{1}, 5000);
  PskServer server(node(2), Key32{1});
  auto acc = server.accept(client.hello(1000), 1000);
  EXPECT_EQ(code_of([&] { client.finish(acc.reply, 6001); }), ErrorCode::handshake_timeout);

  PskClient on_time(node(1), Key32{1}, 5000);
  auto ok = server.accept(on_time.hello(1000), 1000);
  EXPECT_NO_THROW(on_time.finish(ok.reply, 6000));
}

TEST(HandshakeTest, ReplayedHelloAndStaleReplyRejected) {
  PskClient client(node(1), Key32{1});
  PskServer server(node(2), Key32{1});
  auto hello = client.hello(0);
  auto first = server.accept(hello, 0);
  EXPECT_EQ(code_of([&] { server.accept(hello, 1); }), ErrorCode::handshake_failed);
  client.finish(first.reply, 1);

  // A recorded reply cannot complete a later handshake.
  client.hello(2);
  EXPECT_EQ(code_of([&] { client.finish(first.reply, 3); }), ErrorCode::handshake_failed);
}

TEST(HandshakeTest, RehandshakeAfterADay) {
  auto p = fresh_pair();
  EXPECT_FALSE(rehandshake_due(p.a, 1000 + kRehandshakeIntervalMs - 1));
  EXPECT_TRUE(rehandshake_due(p.a, 1000 + kRehandshakeIntervalMs));
}

TEST(ChannelTest, FifoWithWiretap) {
  auto tap = std::make_shared<Wiretap>();
  Channel ch(tap);
  ch.send_bytes({1, 2, 3});
  ch.send_bytes({4, 5});
  EXPECT_EQ(ch.pending(), 2u);
  EXPECT_EQ(*ch.receive(), (Bytes{1, 2, 3}));
  EXPECT_EQ(*ch.receive(), (Bytes{4, 5}));
  EXPECT_FALSE(ch.receive());
  EXPECT_EQ(tap->frame_count(), 2u);
  EXPECT_EQ(tap->total_bytes(), 5u);
  EXPECT_TRUE(tap->contains(Bytes{2, 3}));
  EXPECT_FALSE(tap->contains(Bytes{3, 4}));
}

TEST(ChannelTest, LengthPrefixedOverSocket) {
  int fds[2];
  ASSERT_EQ(socketpair(AF_UNIX, SOCK_STREAM, 0, fds), 0);
  std::thread writer([&] {
    write_message(fds[0], Bytes{9, 8, 7});
    write_message(fds[0], Bytes{});
    close(fds[0]);
  });
  EXPECT_EQ(*read_message(fds[1]), (Bytes{9, 8, 7}));
  EXPECT_EQ(*read_message(fds[1]), Bytes{});
  EXPECT_FALSE(read_message(fds[1]));
  writer.join();
  close(fds[1]);
}

TEST(ChannelTest, OversizedMessageRejected) {
  int fds[2];
  ASSERT_EQ(socketpair(AF_UNIX, SOCK_STREAM, 0, fds), 0);
  const std::uint8_t huge[4] = {0xff, 0xff, 0xff, 0xff};
  ASSERT_EQ(write(fds[0], huge, 4), 4);
  EXPECT_EQ(code_of([&] { read_message(fds[1]); }), ErrorCode::malformed_frame);
  close(fds[0]);
  close(fds[1]);
}
