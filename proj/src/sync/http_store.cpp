#include <httplib.h>

#include <json.hpp>

#include "sealvault/common/error.hpp"
#include "sealvault/sync/store.hpp"

namespace sealvault::sync {
namespace {

std::string strip_quotes(std::string v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

struct HttpStore::Impl {
  std::unique_ptr<httplib::Client> client;
  std::string base_path;  // "" or "/bucket"
  std::string location;
  httplib::Headers auth;

  std::string object_path(const std::string& key) const {
    validate_object_key(key);
    return base_path + "/" + key;
  }

  [[noreturn]] void unreachable(httplib::Error err) const {
    throw Error(ErrorCode::kStoreUnreachable, location + ": " + httplib::to_string(err));
  }

  void check_status(const httplib::Result& res, const std::string& what) const {
    if (!res) unreachable(res.error());
    int s = res->status;
    if (s >= 200 && s < 300) return;
    if (s == 401 || s == 403) {
      throw Error(ErrorCode::kAuthenticationFailure, what + ": remote rejected credentials");
    }
    if (s == 412) throw Error(ErrorCode::kPreconditionFailed, what);
    if (s >= 500) throw Error(ErrorCode::kStoreUnreachable, what + ": HTTP " + std::to_string(s));
    throw Error(ErrorCode::kIo, what + ": HTTP " + std::to_string(s));
  }
};

HttpStore::HttpStore(const std::string& base_url, std::string token) : impl_(std::make_unique<Impl>()) {
  constexpr std::string_view scheme = "http://";
  if (!base_url.starts_with(scheme)) {
    throw Error(ErrorCode::kInvalidArgument, "remote URL must start with http://");
  }
  std::size_t slash = base_url.find('/', scheme.size());
  std::string host_port = base_url.substr(0, slash);
  if (slash != std::string::npos) {
    impl_->base_path = base_url.substr(slash);
    while (!impl_->base_path.empty() && impl_->base_path.back() == '/') impl_->base_path.pop_back();
  }
  if (host_port.size() == scheme.size()) throw Error(ErrorCode::kInvalidArgument, "remote URL has no host");
  impl_->location = base_url;
  impl_->client = std::make_unique<httplib::Client>(host_port);
  impl_->client->set_connection_timeout(5, 0);
  impl_->client->set_read_timeout(60, 0);
  impl_->client->set_write_timeout(60, 0);
  if (!token.empty()) impl_->auth.emplace("Authorization", "Bearer " + token);
  secure_wipe(token.data(), token.size());
}

HttpStore::~HttpStore() = default;

std::string HttpStore::put_object(const std::string& key, ByteView data,
                                  const PutCondition& condition) {
  httplib::Headers headers = impl_->auth;
  if (condition.kind == PutCondition::Kind::kIfMatch) {
    headers.emplace("If-Match", "\"" + condition.version + "\"");
  } else if (condition.kind == PutCondition::Kind::kIfAbsent) {
    headers.emplace("If-None-Match", "*");
  }
  auto res = impl_->client->Put(impl_->object_path(key), headers,
                                reinterpret_cast<const char*>(data.data()), data.size(),
                                "application/octet-stream");
  impl_->check_status(res, "PUT " + key);
  return strip_quotes(res->get_header_value("ETag"));
}

std::optional<RemoteObject> HttpStore::get_object(const std::string& key) {
  auto res = impl_->client->Get(impl_->object_path(key), impl_->auth);
  if (res && res->status == 404) return std::nullopt;
  impl_->check_status(res, "GET " + key);
  RemoteObject obj;
  obj.data.assign(res->body.begin(), res->body.end());
  obj.version = strip_quotes(res->get_header_value("ETag"));
  return obj;
}

std::vector<ObjectInfo> HttpStore::list(const std::string& prefix) {
  std::string path = impl_->base_path + "/?prefix=" + httplib::detail::encode_query_param(prefix);
  auto res = impl_->client->Get(path, impl_->auth);
  impl_->check_status(res, "LIST " + prefix);
  std::vector<ObjectInfo> out;
  try {
    auto doc = nlohmann::json::parse(res->body);
    for (const auto& o : doc.at("objects")) {
      out.push_back({o.at("key").get<std::string>(), o.at("version").get<std::string>(),
                     o.at("size").get<std::uint64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad listing from remote: ") + e.what());
  }
  return out;
}

void HttpStore::remove(const std::string& key) {
  auto res = impl_->client->Delete(impl_->object_path(key), impl_->auth);
  if (res && res->status == 404) return;
  impl_->check_status(res, "DELETE " + key);
}

}  // namespace sealvault::sync
