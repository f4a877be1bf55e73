// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/session.hpp"

#include <charconv>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include "pdn/sampler/server_role.hpp"
#include "pdn/timing.hpp"

namespace pdn {
namespace {

constexpr const char* kCsvHeader =
    "iteration,sparsity,encrypted_values,client_forward_time,server_forward_time,"
    "encrypt_time,denoise_time,decrypt_time,bytes_up,bytes_down,reencrypted,forced,"
    "level_after";
constexpr std::size_t kCsvColumns = 13;

std::string message_of(const std::exception_ptr& err) {
  try {
    std::rethrow_exception(err);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

RunReport assemble(const sampler::ClientConfig& config, wire::TransportKind transport,
                   const sampler::ClientRole& client, const sampler::ServerRole& server,
                   const wire::Channel& channel) {
  RunReport report;
  report.config = config;
  report.transport = transport;
  const auto& c = client.iterations();
  const auto& s = server.iterations();
  for (std::size_t i = 0; i < c.size(); ++i) {
    IterationRecord r;
    r.iteration = static_cast<std::uint32_t>(i);
    r.sparsity = c[i].sparsity;
    r.encrypted_values = c[i].encrypted_values;
    r.client_forward_time = c[i].forward_time;
    r.encrypt_time = c[i].encrypt_time;
    r.decrypt_time = c[i].decrypt_time;
    r.bytes_up = c[i].bytes_up;
    r.bytes_down = c[i].bytes_down;
    r.reencrypted = c[i].reencrypted;
    r.forced = c[i].forced;
    if (i < s.size()) {
      r.server_forward_time = s[i].forward_time;
      r.denoise_time = s[i].denoise_time;
      r.level_after = static_cast<std::uint32_t>(s[i].level_after);
    }
    report.iterations.push_back(r);
  }
  report.totals = sum_iterations(report.iterations);
  report.traffic = channel.stats();
  report.control_bytes_up = report.traffic.bytes_sent - report.totals.bytes_up;
  report.control_bytes_down = report.traffic.bytes_received - report.totals.bytes_down;
  return report;
}

template <typename T>
T parse_number(const std::string& field) {
  T value{};
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) throw FormatError("bad CSV field '" + field + "'");
  return value;
}

}  // namespace

RunTotals sum_iterations(const std::vector<IterationRecord>& iterations) {
  RunTotals t;
  for (const auto& r : iterations) {
    t.client_forward_time += r.client_forward_time;
    t.server_forward_time += r.server_forward_time;
    t.encrypt_time += r.encrypt_time;
    t.denoise_time += r.denoise_time;
    t.decrypt_time += r.decrypt_time;
    t.bytes_up += r.bytes_up;
    t.bytes_down += r.bytes_down;
    t.reencryptions += r.reencrypted ? 1 : 0;
    t.forced_reencryptions += r.forced ? 1 : 0;
  }
  return t;
}

PrivateSample run_session(const sampler::ClientConfig& config, wire::TransportKind transport) {
  return run_session(config, wire::make_channel_pair(transport), transport);
}

PrivateSample run_session(const sampler::ClientConfig& config, wire::ChannelPair channels,
                          wire::TransportKind transport) {
  sampler::ClientRole client(config);
  sampler::ServerRole server;
  auto [client_end, server_end] = std::move(channels);
  if (!client_end || !server_end) throw ConfigError("run_session needs two endpoints");

  std::exception_ptr server_error;
  Stopwatch watch;
  std::thread worker([&server, &server_error, ch = server_end.get()] {
    try {
      server.run(*ch);
    } catch (...) {
      server_error = std::current_exception();
    }
    ch->close();
  });

  PrivateSample out;
  std::exception_ptr client_error;
  try {
    out.latent = client.run(*client_end);
  } catch (...) {
    client_error = std::current_exception();
  }
  client_end->close();
  worker.join();

  out.report = assemble(config, transport, client, server, *client_end);
  out.report.wall_time = watch.seconds();
  if (client_error || server_error) {
    std::string what = "session aborted";
    if (server_error) what += "; server: " + message_of(server_error);
    if (client_error) what += "; client: " + message_of(client_error);
    throw SessionAborted(what, std::move(out.report));
  }
  out.report.complete = true;
  return out;
}

std::string report_csv(const RunReport& report) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  char buf[64];
  auto real = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : report.iterations) {
    os << r.iteration << ',' << real(r.sparsity) << ',' << r.encrypted_values << ','
       << real(r.client_forward_time) << ',' << real(r.server_forward_time) << ','
       << real(r.encrypt_time) << ',' << real(r.denoise_time) << ',' << real(r.decrypt_time)
       << ',' << r.bytes_up << ',' << r.bytes_down << ',' << (r.reencrypted ? 1 : 0) << ','
       << (r.forced ? 1 : 0) << ',' << r.level_after << '\n';
  }
  return os.str();
}

std::vector<IterationRecord> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw FormatError("unexpected CSV header");
  std::vector<IterationRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != kCsvColumns) throw FormatError("CSV row has the wrong column count");
    IterationRecord r;
    r.iteration = parse_number<std::uint32_t>(f[0]);
    r.sparsity = parse_number<double>(f[1]);
    r.encrypted_values = parse_number<std::uint64_t>(f[2]);
    r.client_forward_time = parse_number<double>(f[3]);
    r.server_forward_time = parse_number<double>(f[4]);
    r.encrypt_time = parse_number<double>(f[5]);
    r.denoise_time = parse_number<double>(f[6]);
    r.decrypt_time = parse_number<double>(f[7]);
    r.bytes_up = parse_number<std::uint64_t>(f[8]);
    r.bytes_down = parse_number<std::uint64_t>(f[9]);
    r.reencrypted = parse_number<int>(f[10]) != 0;
    r.forced = parse_number<int>(f[11]) != 0;
    r.level_after = parse_number<std::uint32_t>(f[12]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pdn
