#pragma once

#include "sealvault/common/bytes.hpp"
#include "sealvault/tee/identity.hpp"

namespace sealvault::tee {

// Local attestation: a report is MACed under a key only the target enclave on
// the same platform can re-derive.

struct ReportBody {
  Digest256 measurement{};
  Digest256 signer{};
  std::uint16_t product_id = 0;
  std::uint16_t isv_svn = 0;
  ByteArray<64> report_data{};
};

struct Report {
  ReportBody body;
  ByteArray<16> mac{};
};

inline constexpr std::size_t kReportBodySize = 32 + 32 + 2 + 2 + 64;

Bytes serialize_report_body(const ReportBody& body);

Report create_report(const PlatformIdentity& platform, const EnclaveIdentity& self_enclave,
                     const EnclaveIdentity& target, const ByteArray<64>& report_data);

bool verify_report(const PlatformIdentity& platform, const EnclaveIdentity& target,
                   const Report& report);

}  // namespace sealvault::tee
