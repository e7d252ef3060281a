#include "sealvault/vault/vault.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <mutex>
#include <ostream>
#include <shared_mutex>

#include "sealvault/common/error.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/crypto/primitives.hpp"
#include "sealvault/modes/filename.hpp"
#include "sealvault/modes/kdf.hpp"
#include "sealvault/vault/layout.hpp"

namespace sealvault::vault {
namespace {

using modes::ModeId;

constexpr Id16 kRootDirId{};
constexpr std::size_t kDirIdObjectSize = 12 + 16 + 16;

Bytes key_label(std::string_view what, const Id16& vault_id, ModeId mode) {
  Bytes label;
  append(label, what);
  append(label, vault_id);
  label.push_back(static_cast<std::uint8_t>(mode));
  return label;
}

Bytes name_key_label(const VaultConfig& c) { return key_label("sealvault/name-key", c.vault_id, c.mode); }
Bytes content_key_label(const VaultConfig& c) {
  return key_label("sealvault/content-key", c.vault_id, c.mode);
}

Bytes file_key_label(const Id16& file_id, std::uint64_t cleartext_size) {
  Bytes label;
  append(label, "sealvault/file-key");
  append(label, file_id);
  put_u64_le(label, cleartext_size);
  return label;
}

bool is_object_name(const std::string& name) {
  return name.size() > modes::kEncryptedNameSuffix.size() &&
         name.ends_with(modes::kEncryptedNameSuffix);
}

/// Removes a temporary file unless released.
class TempFileGuard {
 public:
  explicit TempFileGuard(fs::path path) : path_(std::move(path)) {}
  ~TempFileGuard() {
    if (!path_.empty()) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  void release() { path_.clear(); }

 private:
  fs::path path_;
};

}  // namespace

Bytes EnclaveImage::default_code() {
  Bytes code;
  append(code, "sealvault simulated enclave image, block sealing service, v1");
  return code;
}

Bytes EnclaveImage::default_signer() {
  Bytes signer;
  append(signer, "sealvault release signer");
  return signer;
}

std::vector<std::string> split_logical_path(std::string_view logical_path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= logical_path.size()) {
    std::size_t next = logical_path.find('/', pos);
    if (next == std::string_view::npos) next = logical_path.size();
    if (next > pos) {
      std::string part(logical_path.substr(pos, next - pos));
      modes::validate_name(part);
      parts.push_back(std::move(part));
    }
    pos = next + 1;
  }
  return parts;
}

VaultConfig load_config(const fs::path& root) {
  fs::path cfg = root / kConfigFileName;
  if (!fs::exists(cfg)) throw Error(ErrorCode::kNotFound, "no vault config at " + cfg.string());
  return parse_config(read_file_bytes(cfg));
}

namespace {

fs::path shard_dir_for(const fs::path& root, const Key256& name_key, const Id16& dir_id) {
  std::string hex = to_hex(ByteView(crypto::hmac_sha256(name_key.view(), dir_id)).first(16));
  return root / kDataDirName / hex.substr(0, 2) / hex.substr(2);
}

}  // namespace

VaultConfig create_vault(const fs::path& root, std::string_view password, ModeId mode,
                         const std::optional<tee::PlatformIdentity>& platform,
                         const CreateOptions& options) {
  if (fs::exists(root) && (!fs::is_directory(root) || !fs::is_empty(root))) {
    throw Error(ErrorCode::kTargetNotEmpty, root.string());
  }
  if (mode == ModeId::kSealed && !platform) throw Error(ErrorCode::kMissingPlatform);
  if (password.empty()) throw Error(ErrorCode::kEmptyPassword);

  VaultConfig config;
  config.vault_id = crypto::random_array<16>();
  config.mode = mode;
  config.kdf_salt = crypto::random_array<modes::kSaltSize>();
  config.kdf_iterations = options.kdf_iterations;

  modes::MasterKeys keys{Key256(crypto::random_array<32>()), Key256(crypto::random_array<32>())};
  modes::Kek kek = modes::derive_kek(password, config.kdf_salt, config.kdf_iterations);
  config.wrapped_name_key = modes::wrap_key(kek, keys.name_key, name_key_label(config));
  if (mode == ModeId::kV1) {
    config.content_key =
        WrappedContentKey{modes::wrap_key(kek, keys.content_key, content_key_label(config))};
  } else {
    auto session = modes::init_enclave(*platform, options.enclave.code, options.enclave.signer,
                                       options.enclave.config);
    config.content_key = SealedContentKey{
        session->encrypt_bytes(keys.content_key.view(), content_key_label(config)).bytes()};
    config.enclave = EnclaveDescriptor{crypto::sha256(options.enclave.code),
                                       crypto::sha256(options.enclave.signer)};
    session->destroy();
  }

  bool existed = fs::exists(root);
  try {
    fs::create_directories(root);
    fs::create_directories(shard_dir_for(root, keys.name_key, kRootDirId));
    write_file_atomic(root / kConfigFileName, serialize_config(config));
  } catch (...) {
    std::error_code ec;
    if (existed) {
      for (const auto& e : fs::directory_iterator(root, ec)) fs::remove_all(e.path(), ec);
    } else {
      fs::remove_all(root, ec);
    }
    throw;
  }
  return config;
}

struct Vault::State {
  fs::path root;
  VaultConfig config;
  modes::MasterKeys keys;
  Key256 dir_key;
  std::shared_ptr<modes::EnclaveSession> session;
  std::unique_ptr<modes::ContentCryptor> cryptor;
  bool unlocked = true;

  mutable std::shared_mutex lifecycle;
  mutable std::mutex namespace_mutex;
  mutable std::array<std::mutex, 64> write_stripes;

  struct Location {
    Id16 parent_id;
    fs::path parent_shard;
    std::string encrypted_name;
    fs::path physical;
  };

  void require_unlocked() const {
    if (!unlocked) throw Error(ErrorCode::kVaultLocked);
  }

  fs::path shard_dir(const Id16& dir_id) const { return shard_dir_for(root, keys.name_key, dir_id); }

  Bytes dir_id_aad() const {
    Bytes aad;
    append(aad, "sealvault/dir-id");
    append(aad, config.vault_id);
    return aad;
  }

  Id16 read_dir_id(const fs::path& entry_dir) const {
    Bytes blob = read_file_bytes(entry_dir / kDirIdFileName);
    if (blob.size() != kDirIdObjectSize) throw Error(ErrorCode::kMalformedBlock, "bad dir id object");
    Id16 id;
    ByteView b(blob);
    if (!crypto::gcm_decrypt(dir_key.view(), b.first(12), dir_id_aad(), b.subspan(12, 16),
                             b.subspan(28, 16), id)) {
      throw Error(ErrorCode::kAuthenticationFailure, "dir id object failed authentication");
    }
    return id;
  }

  Id16 create_dir_entry(const fs::path& entry_dir) const {
    Id16 id = crypto::random_array<16>();
    Bytes blob(kDirIdObjectSize);
    std::span<std::uint8_t> s(blob);
    crypto::random_bytes(s.first(12));
    crypto::gcm_encrypt(dir_key.view(), s.first(12), dir_id_aad(), id, s.subspan(12, 16),
                        s.subspan<28, 16>());
    fs::create_directories(shard_dir(id));
    fs::create_directories(entry_dir);
    write_file_atomic(entry_dir / kDirIdFileName, blob);
    return id;
  }

  /// Walks `parts` as directories starting at the root.
  Id16 resolve_dir(std::span<const std::string> parts, bool create) const {
    Id16 current = kRootDirId;
    for (const std::string& part : parts) {
      fs::path entry = shard_dir(current) / modes::encrypt_filename(keys.name_key, current, part);
      std::error_code ec;
      auto status = fs::status(entry, ec);
      if (fs::is_directory(status)) {
        current = read_dir_id(entry);
      } else if (fs::exists(status)) {
        throw Error(ErrorCode::kInvalidArgument, "'" + part + "' is not a directory");
      } else if (create) {
        current = create_dir_entry(entry);
      } else {
        throw Error(ErrorCode::kNotFound, "no directory '" + part + "'");
      }
    }
    return current;
  }

  Location locate(const std::vector<std::string>& parts, bool create_parents) const {
    if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "path names the vault root");
    Location loc;
    loc.parent_id = resolve_dir(std::span(parts).first(parts.size() - 1), create_parents);
    loc.parent_shard = shard_dir(loc.parent_id);
    loc.encrypted_name = modes::encrypt_filename(keys.name_key, loc.parent_id, parts.back());
    loc.physical = loc.parent_shard / loc.encrypted_name;
    return loc;
  }

  std::mutex& stripe_for(const fs::path& physical) const {
    return write_stripes[std::hash<std::string>{}(physical.string()) % write_stripes.size()];
  }
};

namespace {

/// Opens a file object and authenticates its header.
class ObjectReader {
 public:
  ObjectReader(const fs::path& physical, const modes::ContentCryptor& cryptor)
      : file_(File::open_read(physical)), cryptor_(cryptor) {
    std::uint64_t ct_size = file_.size();
    auto pt = vault::cleartext_size(ct_size, cryptor.block_overhead());
    if (!pt) throw Error(ErrorCode::kMalformedBlock, "object size matches no cleartext size");
    cleartext_size_ = *pt;

    ByteArray<kFileHeaderSize> header;
    file_.read_exact_at(header, 0);
    ByteView h(header);
    file_id_ = to_array<16>(h.first(16));
    std::size_t key_size = cryptor.protected_key_size();
    ByteView padding = h.subspan(16 + key_size);
    if (!std::all_of(padding.begin(), padding.end(), [](std::uint8_t c) { return c == 0; })) {
      throw Error(ErrorCode::kMalformedBlock, "nonzero header padding");
    }
    file_key_ = cryptor.unprotect_file_key(h.subspan(16, key_size),
                                           file_key_label(file_id_, cleartext_size_));
  }

  std::uint64_t cleartext_size() const { return cleartext_size_; }
  std::uint64_t blocks() const { return block_count(cleartext_size_); }

  Bytes block(std::uint64_t index) {
    std::uint64_t stride = modes::kBlockSize + cryptor_.block_overhead();
    std::uint64_t clear_len =
        std::min<std::uint64_t>(modes::kBlockSize, cleartext_size_ - index * modes::kBlockSize);
    Bytes ct(clear_len + cryptor_.block_overhead());
    file_.read_exact_at(ct, kFileHeaderSize + index * stride);
    return cryptor_.decrypt_block(file_key_, file_id_, index, ct);
  }

 private:
  File file_;
  const modes::ContentCryptor& cryptor_;
  std::uint64_t cleartext_size_ = 0;
  Id16 file_id_{};
  Key256 file_key_;
};

}  // namespace

Vault::Vault(std::unique_ptr<State> state) : state_(std::move(state)) {}
Vault::Vault(Vault&&) noexcept = default;
Vault& Vault::operator=(Vault&&) noexcept = default;

Vault::~Vault() {
  if (state_ && state_->unlocked) lock();
}

Vault Vault::unlock(const fs::path& root, std::string_view password,
                    const std::optional<tee::PlatformIdentity>& platform,
                    const UnlockOptions& options) {
  auto state = std::make_unique<State>();
  state->root = root;
  state->config = load_config(root);
  const VaultConfig& c = state->config;
  if (c.mode == ModeId::kSealed && !platform) throw Error(ErrorCode::kMissingPlatform);

  modes::Kek kek = modes::derive_kek(password, c.kdf_salt, c.kdf_iterations);
  try {
    state->keys.name_key = modes::unwrap_key(kek, c.wrapped_name_key, name_key_label(c));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAuthenticationFailure) throw Error(ErrorCode::kWrongPassword, "password does not unlock this vault");
    throw;
  }

  if (c.mode == ModeId::kV1) {
    try {
      state->keys.content_key = modes::unwrap_key(
          kek, std::get<WrappedContentKey>(c.content_key).wrapped, content_key_label(c));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAuthenticationFailure) throw Error(ErrorCode::kWrongPassword, "password does not unlock this vault");
      throw;
    }
    state->cryptor = modes::make_v1_cryptor(state->keys.content_key);
  } else {
    state->session = modes::init_enclave(*platform, options.enclave.code, options.enclave.signer,
                                         options.enclave.config);
    try {
      Bytes raw = state->session->decrypt_bytes(std::get<SealedContentKey>(c.content_key).blob,
                                                content_key_label(c));
      state->keys.content_key = Key256(raw);
      secure_wipe(raw.data(), raw.size());
    } catch (const Error& e) {
      state->session->destroy();
      throw Error(ErrorCode::kUnsealFailure, std::string(error_name(e.code())));
    }
    state->cryptor = modes::make_sealed_cryptor(state->session);
  }
  state->dir_key = Key256(crypto::hmac_sha256(state->keys.name_key.view(),
                                              as_bytes("sealvault/dir-id-key")));
  return Vault(std::move(state));
}

ModeId Vault::mode() const { return state_->config.mode; }
const fs::path& Vault::root() const { return state_->root; }
const VaultConfig& Vault::config() const { return state_->config; }
bool Vault::is_unlocked() const { return state_ && state_->unlocked; }

void Vault::lock() {
  std::unique_lock guard(state_->lifecycle);
  if (!state_->unlocked) return;
  state_->unlocked = false;
  state_->cryptor.reset();
  if (state_->session && state_->session->is_active()) state_->session->destroy();
  state_->session.reset();
  state_->keys.content_key.wipe();
  state_->keys.name_key.wipe();
  state_->dir_key.wipe();
}

std::uint64_t Vault::write_file(std::string_view logical_path, std::istream& content,
                                const WriteOptions& options) {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto parts = split_logical_path(logical_path);
  State::Location loc;
  {
    std::lock_guard ns(state_->namespace_mutex);
    loc = state_->locate(parts, /*create_parents=*/true);
  }
  std::lock_guard stripe(state_->stripe_for(loc.physical));
  if (fs::is_directory(loc.physical)) {
    throw Error(ErrorCode::kAlreadyExists, "a directory exists at " + std::string(logical_path));
  }

  const modes::ContentCryptor& cryptor = *state_->cryptor;
  fs::create_directories(loc.parent_shard);
  fs::path tmp = temp_path_in(loc.parent_shard);
  TempFileGuard guard(tmp);
  File out = File::create_new(tmp);
  out.write_all(Bytes(kFileHeaderSize, 0));

  Id16 file_id = crypto::random_array<16>();
  Key256 file_key(crypto::random_array<32>());
  Bytes buffer(modes::kBlockSize);
  std::uint64_t total = 0;
  for (std::uint64_t index = 0;; ++index) {
    content.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
    auto n = static_cast<std::size_t>(content.gcount());
    if (n == 0) break;
    out.write_all(cryptor.encrypt_block(file_key, file_id, index, ByteView(buffer).first(n)));
    total += n;
    if (n < buffer.size()) break;
  }
  if (content.bad()) throw Error(ErrorCode::kIo, "error reading source stream");
  secure_wipe(buffer.data(), buffer.size());

  Bytes header;
  header.reserve(kFileHeaderSize);
  append(header, file_id);
  append(header, cryptor.protect_file_key(file_key, file_key_label(file_id, total)));
  header.resize(kFileHeaderSize, 0);
  out.write_at(header, 0);
  out.close();

  if (options.before_commit) options.before_commit();
  fs::rename(tmp, loc.physical);
  guard.release();
  return total;
}

std::uint64_t Vault::write_file(std::string_view logical_path, ByteView content,
                                const WriteOptions& options) {
  struct SpanBuf : std::streambuf {
    explicit SpanBuf(ByteView b) {
      char* p = const_cast<char*>(reinterpret_cast<const char*>(b.data()));
      setg(p, p, p + b.size());
    }
  } buf(content);
  std::istream in(&buf);
  return write_file(logical_path, in, options);
}

void Vault::read_file(std::string_view logical_path, std::ostream& out) const {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  State::Location loc = state_->locate(split_logical_path(logical_path), false);
  std::error_code ec;
  auto status = fs::status(loc.physical, ec);
  if (!fs::exists(status)) throw Error(ErrorCode::kNotFound, std::string(logical_path));
  if (fs::is_directory(status)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(logical_path) + " is a directory");
  }
  ObjectReader reader(loc.physical, *state_->cryptor);
  for (std::uint64_t i = 0; i < reader.blocks(); ++i) {
    Bytes clear = reader.block(i);
    out.write(reinterpret_cast<const char*>(clear.data()), static_cast<std::streamsize>(clear.size()));
    if (!out) throw Error(ErrorCode::kIo, "error writing output stream");
  }
}

Bytes Vault::read_file(std::string_view logical_path) const {
  return read_range(logical_path, 0, SIZE_MAX);
}

Bytes Vault::read_range(std::string_view logical_path, std::uint64_t offset,
                        std::size_t length) const {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  State::Location loc = state_->locate(split_logical_path(logical_path), false);
  std::error_code ec;
  auto status = fs::status(loc.physical, ec);
  if (!fs::exists(status)) throw Error(ErrorCode::kNotFound, std::string(logical_path));
  if (fs::is_directory(status)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(logical_path) + " is a directory");
  }
  ObjectReader reader(loc.physical, *state_->cryptor);
  std::uint64_t size = reader.cleartext_size();
  if (offset >= size) return {};
  std::uint64_t end = size - offset < length ? size : offset + length;
  Bytes out;
  out.reserve(end - offset);
  for (std::uint64_t i = offset / modes::kBlockSize; i * modes::kBlockSize < end; ++i) {
    Bytes clear = reader.block(i);
    std::uint64_t block_start = i * modes::kBlockSize;
    std::uint64_t from = std::max(offset, block_start) - block_start;
    std::uint64_t to = std::min<std::uint64_t>(end - block_start, clear.size());
    out.insert(out.end(), clear.begin() + static_cast<std::ptrdiff_t>(from),
               clear.begin() + static_cast<std::ptrdiff_t>(to));
  }
  return out;
}

std::vector<DirEntry> Vault::list_dir(std::string_view logical_path) const {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto parts = split_logical_path(logical_path);
  Id16 dir_id = state_->resolve_dir(parts, false);
  fs::path shard = state_->shard_dir(dir_id);
  std::vector<DirEntry> entries;
  std::error_code ec;
  if (!fs::is_directory(shard, ec)) return entries;
  for (const auto& item : fs::directory_iterator(shard)) {
    std::string physical = item.path().filename().string();
    if (!is_object_name(physical)) continue;
    DirEntry entry;
    entry.physical_name = physical;
    try {
      entry.name = modes::decrypt_filename(state_->keys.name_key, dir_id, physical);
    } catch (const Error&) {
      entry.name = physical;
      entry.kind = EntryKind::kUnreadable;
      entries.push_back(std::move(entry));
      continue;
    }
    if (item.is_directory()) {
      entry.kind = EntryKind::kDirectory;
    } else {
      entry.kind = EntryKind::kFile;
      entry.size = cleartext_size(item.file_size(), state_->cryptor->block_overhead());
    }
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(),
            [](const DirEntry& a, const DirEntry& b) { return a.name < b.name; });
  return entries;
}

std::optional<DirEntry> Vault::stat(std::string_view logical_path) const {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto parts = split_logical_path(logical_path);
  if (parts.empty()) return DirEntry{"", EntryKind::kDirectory, std::nullopt, ""};
  State::Location loc;
  try {
    loc = state_->locate(parts, false);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound) return std::nullopt;
    throw;
  }
  std::error_code ec;
  auto status = fs::status(loc.physical, ec);
  if (!fs::exists(status)) return std::nullopt;
  DirEntry entry{parts.back(), EntryKind::kFile, std::nullopt, loc.encrypted_name};
  if (fs::is_directory(status)) {
    entry.kind = EntryKind::kDirectory;
  } else {
    entry.size = cleartext_size(fs::file_size(loc.physical), state_->cryptor->block_overhead());
  }
  return entry;
}

void Vault::make_dir(std::string_view logical_path) {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto parts = split_logical_path(logical_path);
  std::lock_guard ns(state_->namespace_mutex);
  state_->resolve_dir(parts, true);
}

void Vault::remove(std::string_view logical_path) {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto parts = split_logical_path(logical_path);
  std::lock_guard ns(state_->namespace_mutex);
  State::Location loc = state_->locate(parts, false);
  std::error_code ec;
  auto status = fs::status(loc.physical, ec);
  if (!fs::exists(status)) throw Error(ErrorCode::kNotFound, std::string(logical_path));
  if (!fs::is_directory(status)) {
    std::lock_guard stripe(state_->stripe_for(loc.physical));
    fs::remove(loc.physical);
    return;
  }
  Id16 id = state_->read_dir_id(loc.physical);
  fs::path shard = state_->shard_dir(id);
  if (fs::is_directory(shard, ec)) {
    for (const auto& item : fs::directory_iterator(shard)) {
      if (is_object_name(item.path().filename().string())) {
        throw Error(ErrorCode::kInvalidArgument, std::string(logical_path) + " is not empty");
      }
    }
    fs::remove_all(shard);
  }
  fs::remove_all(loc.physical);
}

void Vault::rename(std::string_view from, std::string_view to) {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto src_parts = split_logical_path(from);
  auto dst_parts = split_logical_path(to);
  std::lock_guard ns(state_->namespace_mutex);
  State::Location src = state_->locate(src_parts, false);
  std::error_code ec;
  auto src_status = fs::status(src.physical, ec);
  if (!fs::exists(src_status)) throw Error(ErrorCode::kNotFound, std::string(from));
  if (src_parts == dst_parts) return;
  bool src_is_dir = fs::is_directory(src_status);
  if (src_is_dir && dst_parts.size() > src_parts.size() &&
      std::equal(src_parts.begin(), src_parts.end(), dst_parts.begin())) {
    throw Error(ErrorCode::kInvalidArgument, "cannot move a directory into itself");
  }
  State::Location dst = state_->locate(dst_parts, true);
  auto dst_status = fs::status(dst.physical, ec);
  if (fs::exists(dst_status) && (src_is_dir || fs::is_directory(dst_status))) {
    throw Error(ErrorCode::kAlreadyExists, std::string(to));
  }
  std::lock_guard stripe(state_->stripe_for(dst.physical));
  fs::create_directories(dst.parent_shard);
  fs::rename(src.physical, dst.physical);
}

fs::path Vault::map_path(std::string_view logical_path) const {
  std::shared_lock life(state_->lifecycle);
  state_->require_unlocked();
  auto parts = split_logical_path(logical_path);
  if (parts.empty()) return state_->shard_dir(kRootDirId);
  return state_->locate(parts, false).physical;
}

}  // namespace sealvault::vault
