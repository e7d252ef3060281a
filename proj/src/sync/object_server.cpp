#include "sealvault/sync/object_server.hpp"

#include <httplib.h>

#include <json.hpp>
#include <thread>

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::sync {

struct ObjectServer::Impl {
  LocalDirStore store;
  Digest256 token_digest{};
  bool require_token = false;
  httplib::Server server;
  std::thread thread;
  std::string host = "127.0.0.1";
  int port = -1;

  Impl(fs::path storage, const std::string& token) : store(std::move(storage)) {
    require_token = !token.empty();
    if (require_token) token_digest = crypto::sha256(as_bytes(token));
  }

  bool authorized(const httplib::Request& req) const {
    if (!require_token) return true;
    std::string h = req.get_header_value("Authorization");
    constexpr std::string_view bearer = "Bearer ";
    if (!h.starts_with(bearer)) return false;
    return crypto::sha256(as_bytes(std::string_view(h).substr(bearer.size()))) == token_digest;
  }

  static std::string key_of(const httplib::Request& req) {
    std::string_view p = req.path;
    while (p.starts_with('/')) p.remove_prefix(1);
    return std::string(p);
  }

  static void fail(httplib::Response& res, const Error& e) {
    switch (e.code()) {
      case ErrorCode::kPreconditionFailed: res.status = 412; break;
      case ErrorCode::kInvalidArgument: res.status = 400; break;
      case ErrorCode::kNotFound: res.status = 404; break;
      default: res.status = 500; break;
    }
    res.set_content(e.what(), "text/plain");
  }

  void install() {
    server.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req)) { res.status = 401; return; }
      try {
        std::string key = key_of(req);
        if (key.empty() || key.ends_with('/')) {
          // Listing, scoped to the directory named by the path.
          nlohmann::json objects = nlohmann::json::array();
          for (const auto& o : store.list(key + req.get_param_value("prefix"))) {
            objects.push_back(
                {{"key", o.key.substr(key.size())}, {"version", o.version}, {"size", o.size}});
          }
          res.set_content(nlohmann::json{{"objects", objects}}.dump(), "application/json");
          return;
        }
        auto obj = store.get_object(key);
        if (!obj) { res.status = 404; return; }
        res.set_header("ETag", "\"" + obj->version + "\"");
        res.set_content(std::string(as_chars(obj->data)), "application/octet-stream");
      } catch (const Error& e) {
        fail(res, e);
      }
    });
    server.Put(".*", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req)) { res.status = 401; return; }
      try {
        PutCondition cond;
        if (req.has_header("If-Match")) {
          std::string v = req.get_header_value("If-Match");
          if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
          cond = PutCondition::if_match(v);
        } else if (req.get_header_value("If-None-Match") == "*") {
          cond = PutCondition::if_absent();
        }
        std::string version = store.put_object(key_of(req), as_bytes(req.body), cond);
        res.set_header("ETag", "\"" + version + "\"");
        res.status = 200;
      } catch (const Error& e) {
        fail(res, e);
      }
    });
    server.Delete(".*", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req)) { res.status = 401; return; }
      try {
        std::string key = key_of(req);
        if (!store.get_object(key)) { res.status = 404; return; }
        store.remove(key);
        res.status = 204;
      } catch (const Error& e) {
        fail(res, e);
      }
    });
  }
};

ObjectServer::ObjectServer(fs::path storage, std::string token)
    : impl_(std::make_unique<Impl>(std::move(storage), token)) {
  secure_wipe(token.data(), token.size());
  impl_->install();
}

ObjectServer::~ObjectServer() { stop(); }

int ObjectServer::start(const std::string& host, int port) {
  impl_->host = host;
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void ObjectServer::serve_forever(const std::string& host, int port) {
  impl_->host = host;
  impl_->port = port;
  if (!impl_->server.listen(host, port)) throw Error(ErrorCode::kIo, "cannot listen on " + host);
}

void ObjectServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int ObjectServer::port() const { return impl_->port; }

std::string ObjectServer::base_url() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace sealvault::sync
