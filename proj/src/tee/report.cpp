#include "sealvault/tee/report.hpp"

#include <openssl/crypto.h>

#include "sealvault/crypto/primitives.hpp"

namespace sealvault::tee {
namespace {

Key128 report_key(const PlatformIdentity& platform, const EnclaveIdentity& target) {
  Bytes msg;
  append(msg, "REPORTv1");
  append(msg, target.measurement);
  return Key128(crypto::aes_cmac(platform.platform_key.view(), msg));
}

}  // namespace

Bytes serialize_report_body(const ReportBody& body) {
  Bytes out;
  out.reserve(kReportBodySize);
  append(out, body.measurement);
  append(out, body.signer);
  put_u16_le(out, body.product_id);
  put_u16_le(out, body.isv_svn);
  append(out, body.report_data);
  return out;
}

Report create_report(const PlatformIdentity& platform, const EnclaveIdentity& self_enclave,
                     const EnclaveIdentity& target, const ByteArray<64>& report_data) {
  Report r;
  r.body = ReportBody{
      .measurement = self_enclave.measurement,
      .signer = self_enclave.signer,
      .product_id = self_enclave.product_id,
      .isv_svn = self_enclave.isv_svn,
      .report_data = report_data,
  };
  Key128 key = report_key(platform, target);
  r.mac = crypto::aes_cmac(key.view(), serialize_report_body(r.body));
  return r;
}

bool verify_report(const PlatformIdentity& platform, const EnclaveIdentity& target,
                   const Report& report) {
  Key128 key = report_key(platform, target);
  auto expected = crypto::aes_cmac(key.view(), serialize_report_body(report.body));
  return CRYPTO_memcmp(expected.data(), report.mac.data(), expected.size()) == 0;
}

}  // namespace sealvault::tee
