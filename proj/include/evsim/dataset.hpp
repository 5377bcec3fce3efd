#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evsim/rng.hpp"

namespace evsim {

struct UserInfo {
    int id = 0;
    int age = 0;
    std::string gender;
    std::string occupation;
    std::string zip;
};

struct ItemInfo {
    int id = 0;
    std::string title;
    int release_year = 0;
    std::vector<std::uint8_t> genre_flags; // aligned with RawDataset::genre_names
};

struct Rating {
    int user_id = 0;
    int item_id = 0;
    int rating = 0; // 1..5
    long long timestamp = 0;
};

// Interaction data in canonical order (users and items sorted by id, ratings
// by (user, item)). Referential integrity is enforced on load.
struct RawDataset {
    std::vector<UserInfo> users;
    std::vector<ItemInfo> items;
    std::vector<std::string> genre_names;
    std::vector<Rating> ratings;

    std::size_t user_index(int user_id) const;
    std::size_t item_index(int item_id) const;
    bool has_user(int user_id) const { return user_index_.count(user_id) > 0; }
    bool has_item(int item_id) const { return item_index_.count(item_id) > 0; }

    // Sorts, rebuilds indexes, and checks integrity; call after mutating.
    void finalize();

private:
    std::unordered_map<int, std::size_t> user_index_;
    std::unordered_map<int, std::size_t> item_index_;
};

enum class DatasetFormat { ml100k, ml1m, csv };

DatasetFormat parse_dataset_format(const std::string& name);

// Reads one of the supported layouts from `dir`. Throws with file and line
// number on malformed rows, and an integrity error on dangling ids or
// duplicate (user, item) ratings.
RawDataset load_dataset(const std::filesystem::path& dir, DatasetFormat format);

// Versioned self-describing text snapshot; loading and re-saving is
// byte-identical.
void save_canonical(const RawDataset& ds, const std::filesystem::path& file);
RawDataset load_canonical(const std::filesystem::path& file);

struct LabeledInteraction {
    int user_id = 0;
    int item_id = 0;
    int label = 0; // 1 iff rating >= threshold
};

std::vector<LabeledInteraction> label_interactions(const RawDataset& ds, double like_threshold);

// Per-user statistics mined from the rating history: activity level, rating
// tendency, and per-genre watch fractions. A user with no history is all
// zeros.
struct Persona {
    double rating_count = 0.0;
    double mean_rating = 0.0;
    std::vector<double> genre_fractions;
};

std::vector<Persona> build_personas(const RawDataset& ds);

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 1;
    int new_items_per_user = 300; // M, typically 3*E
};

struct SplitResult {
    std::vector<LabeledInteraction> train;
    std::vector<LabeledInteraction> test;
    // Per-user samples of never-watched items; labels unknown by construction.
    std::vector<std::pair<int, int>> new_pairs;
    std::vector<int> users_short_of_candidates; // fewer than M unwatched items
};

// Train/test partition the labeled interactions; the "new" set samples M
// unwatched items per user. Deterministic under the spec's seed.
SplitResult split(const RawDataset& ds, const std::vector<LabeledInteraction>& interactions,
                  const SplitSpec& spec);

// Synthetic interaction data in the ml-100k layout, with planted user/item
// structure (occupation taste clusters, genre affinities, quality-skewed
// popularity) so interest models have signal to learn.
struct DemoSpec {
    int users = 943;
    int items = 1682;
    long ratings = 100000;
    std::uint64_t seed = 7;
};

RawDataset make_demo_dataset(const DemoSpec& spec);

// Emits u.data / u.user / u.item / u.genre in the ml-100k layout.
void write_ml100k(const RawDataset& ds, const std::filesystem::path& dir);

} // namespace evsim
