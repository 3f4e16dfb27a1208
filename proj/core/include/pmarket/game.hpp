#ifndef PMARKET_GAME_HPP
#define PMARKET_GAME_HPP

#include <string>
#include <vector>

namespace pm {

/// Finite normal-form game. Joint profiles are ordered lexicographically
/// with player 0 most significant: for a 2x3 game the profile index is
/// a0*3 + a1. The utilities table is indexed [profile][player].
struct NormalFormGame {
    int n_players = 0;
    std::vector<int> n_actions;
    std::vector<std::vector<std::string>> action_names;  // optional labels
    std::vector<std::vector<double>> utilities;

    int profile_count() const;
    int profile_index(const std::vector<int>& actions) const;
    std::vector<int> profile_actions(int profile) const;

    /// Index of the profile obtained from `profile` by switching `player`
    /// to `action`.
    int deviate(int profile, int player, int action) const;

    double utility(int profile, int player) const { return utilities[profile][player]; }
    void validate() const;

    /// Wire format used by the ce-solve command:
    ///   {"players": 2, "actions": [["c","d"],["c","d"]],
    ///    "utilities": [[u0,u1], ...]}   (profiles in lexicographic order)
    static NormalFormGame from_json_text(const std::string& text);
    std::string to_json_text() const;
};

}  // namespace pm

#endif  // PMARKET_GAME_HPP
