//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_CHAT_HPP_
#define CONVMOL_CHAT_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convmol/dialogue.hpp"
#include "convmol/fingerprint.hpp"

namespace convmol::chat {

// ---- backends ------------------------------------------------------------

class BackendError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Generation {
  // Exactly k entries.
  std::vector<std::string> candidates;
  // Set when fewer than k distinct answers were available and the list was
  // padded with repeats of the first one.
  bool padded = false;
};

/// Understanding and generation contract. Implementations are safe for
/// concurrent use and report failures as BackendError.
class Backend {
public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual std::string understand(std::string_view smiles) = 0;
  virtual Generation generate(std::string_view query, int k) = 0;
};

// Lowercase alphanumeric words minus stop words.
std::vector<std::string> retrieval_terms(std::string_view text);
const std::vector<std::string_view> &stop_words();

/// TF-IDF retrieval over descriptions (unigrams and bigrams, tf = 1 + ln c,
/// idf = ln((1 + N) / (1 + df)) + 1, cosine) for generation, and Morgan
/// nearest neighbor over molecules for understanding. Ties go to the lower
/// corpus index.
class RetrievalBackend: public Backend {
public:
  // Throws std::invalid_argument for an empty corpus or an invalid SMILES.
  explicit RetrievalBackend(std::vector<dialogue::MoleculeDescriptionPair> corpus);

  std::string id() const override { return "retrieval"; }
  std::string understand(std::string_view smiles) override;
  Generation generate(std::string_view query, int k) override;

  // Cosine similarity of the query to every stored description.
  std::vector<double> scores(std::string_view query) const;
  // Corpus indices by decreasing score.
  std::vector<int> rank(std::string_view query) const;
  // Index answering an understanding request; throws BackendError when
  // the SMILES does not parse.
  int nearest(std::string_view smiles) const;

  const std::vector<dialogue::MoleculeDescriptionPair> &corpus() const {
    return corpus_;
  }

private:
  using Vector = std::vector<std::pair<int, double>>;  // sorted by term id

  Vector vectorize(std::string_view text) const;

  std::vector<dialogue::MoleculeDescriptionPair> corpus_;
  std::vector<std::string> canonical_;
  std::vector<fp::Fingerprint> fingerprints_;
  std::unordered_map<std::string, int> vocabulary_;
  std::vector<double> idf_;
  std::vector<Vector> documents_;
};

/// JSON over HTTP: POST {endpoint}/generate {"query","k"} -> {"candidates"}
/// and POST {endpoint}/understand {"smiles"} -> {"description"}.
class RemoteBackend: public Backend {
public:
  // Throws std::invalid_argument for a malformed URL.
  RemoteBackend(std::string endpoint_url, double timeout_seconds = 10.0);

  std::string id() const override { return "remote"; }
  std::string understand(std::string_view smiles) override;
  Generation generate(std::string_view query, int k) override;

private:
  std::string post(const std::string &route, const std::string &body) const;

  std::string origin_;
  std::string base_path_;
  double timeout_;
};

// Pads or truncates to k; flags padding.
Generation normalize_generation(std::vector<std::string> candidates, int k);

/// Dialogue-builder provider drawing candidates from a backend.
class BackendCandidateProvider: public dialogue::CandidateProvider {
public:
  explicit BackendCandidateProvider(Backend &backend): backend_(backend) { }
  std::string id() const override { return backend_.id(); }
  std::vector<std::string> propose(const dialogue::ProposalRequest &req) override;

private:
  Backend &backend_;
};

// ---- sessions ------------------------------------------------------------

enum class Role { kUser, kSystem };
enum class Kind { kMolecule, kText };

std::string_view role_name(Role role);
std::string_view kind_name(Kind kind);

struct Candidate {
  std::string smiles;
  bool valid = false;
  std::optional<double> sim_to_prev;
};

struct CandidateSet {
  std::vector<Candidate> candidates;
  std::optional<int> chosen;
  bool padded = false;
};

struct Event {
  std::int64_t seq = 0;
  Role role = Role::kUser;
  Kind kind = Kind::kText;
  std::string content;
  // Molecule events only.
  std::optional<bool> valid;
  // "choice" for a user-selected refinement, "padded" for padded sets.
  std::optional<std::string> tag;
  // Backend query that produced a system molecule.
  std::optional<std::string> query;
  // Full candidate list behind a generated system molecule.
  std::optional<CandidateSet> candidates;
  std::string time;
};

std::string event_to_json(const Event &event);
Event parse_event(std::string_view json_line);
std::string candidate_set_to_json(const CandidateSet &set);

using Clock = std::function<std::string()>;
// UTC ISO-8601 wall clock with millisecond precision.
std::string system_time();

/// Append-only conversation history H(M, T). Not thread safe; callers
/// serialize turns on one session.
class Session {
public:
  Session(std::string id, std::string backend_id, Clock clock = system_time);

  const std::string &id() const { return id_; }
  const std::string &backend_id() const { return backend_id_; }
  const std::string &created_at() const { return created_at_; }
  const std::vector<Event> &events() const { return events_; }

  // Committed events are also appended to `log` (header written at once).
  void attach_log(std::ostream *log);

  std::string header_json() const;
  // Header line followed by one line per event.
  std::string to_jsonl() const;

  // Appends events atomically: seq and time are assigned here.
  void commit(std::vector<Event> events);

  std::string now() const { return clock_(); }

private:
  std::string id_;
  std::string backend_id_;
  Clock clock_;
  std::string created_at_;
  std::vector<Event> events_;
  std::ostream *log_ = nullptr;
};

class ChatError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// All user texts joined by single spaces, then " It looks like X." for
/// the latest system molecule X. Throws ChatError without user text.
std::string compose_generation_query(const std::vector<Event> &history);

inline constexpr int kDefaultCandidates = 3;

/// Generation turn. `choose` selects a candidate of the previous turn as
/// the molecule to refine. Nothing is committed when the backend fails.
CandidateSet generate_turn(Session &session, Backend &backend,
                           std::string_view text, int k = kDefaultCandidates,
                           std::optional<int> choose = std::nullopt);

/// Understanding turn. Throws ChatError for an unparseable SMILES before
/// the backend is called.
std::string understand_turn(Session &session, Backend &backend,
                            std::string_view smiles);

}  // namespace convmol::chat

#endif  // CONVMOL_CHAT_HPP_
