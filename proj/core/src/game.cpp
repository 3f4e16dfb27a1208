#include "pmarket/game.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace pm {

int NormalFormGame::profile_count() const {
    int count = 1;
    for (int n : n_actions) count *= n;
    return count;
}

int NormalFormGame::profile_index(const std::vector<int>& actions) const {
    if (static_cast<int>(actions.size()) != n_players) {
        throw std::invalid_argument("profile has wrong number of actions");
    }
    int idx = 0;
    for (int i = 0; i < n_players; ++i) {
        if (actions[i] < 0 || actions[i] >= n_actions[i]) {
            throw std::invalid_argument("action index out of range");
        }
        idx = idx * n_actions[i] + actions[i];
    }
    return idx;
}

std::vector<int> NormalFormGame::profile_actions(int profile) const {
    std::vector<int> actions(static_cast<std::size_t>(n_players));
    for (int i = n_players - 1; i >= 0; --i) {
        actions[i] = profile % n_actions[i];
        profile /= n_actions[i];
    }
    return actions;
}

int NormalFormGame::deviate(int profile, int player, int action) const {
    std::vector<int> actions = profile_actions(profile);
    actions[player] = action;
    return profile_index(actions);
}

void NormalFormGame::validate() const {
    if (n_players < 1) throw std::invalid_argument("game needs at least one player");
    if (static_cast<int>(n_actions.size()) != n_players) {
        throw std::invalid_argument("action-count list length != player count");
    }
    for (int n : n_actions) {
        if (n < 1) throw std::invalid_argument("every player needs at least one action");
    }
    if (static_cast<int>(utilities.size()) != profile_count()) {
        throw std::invalid_argument("utility table has wrong profile count");
    }
    for (const auto& row : utilities) {
        if (static_cast<int>(row.size()) != n_players) {
            throw std::invalid_argument("utility row has wrong player count");
        }
        for (double u : row) {
            if (!std::isfinite(u)) throw std::invalid_argument("utilities must be finite");
        }
    }
    if (!action_names.empty()) {
        if (static_cast<int>(action_names.size()) != n_players) {
            throw std::invalid_argument("action-name list length != player count");
        }
        for (int i = 0; i < n_players; ++i) {
            if (static_cast<int>(action_names[i].size()) != n_actions[i]) {
                throw std::invalid_argument("action-name count != action count");
            }
        }
    }
}

NormalFormGame NormalFormGame::from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("game file is not valid JSON: ") + e.what());
    }
    NormalFormGame game;
    try {
        game.n_players = doc.at("players").get<int>();
        for (const auto& names : doc.at("actions")) {
            std::vector<std::string> labels;
            for (const auto& name : names) labels.push_back(name.get<std::string>());
            game.action_names.push_back(std::move(labels));
            game.n_actions.push_back(static_cast<int>(game.action_names.back().size()));
        }
        for (const auto& row : doc.at("utilities")) {
            std::vector<double> values;
            for (const auto& u : row) values.push_back(u.get<double>());
            game.utilities.push_back(std::move(values));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad game document: ") + e.what());
    }
    game.validate();
    return game;
}

std::string NormalFormGame::to_json_text() const {
    validate();
    nlohmann::json doc;
    doc["players"] = n_players;
    nlohmann::json actions = nlohmann::json::array();
    for (int i = 0; i < n_players; ++i) {
        nlohmann::json names = nlohmann::json::array();
        for (int a = 0; a < n_actions[i]; ++a) {
            names.push_back(action_names.empty() ? "a" + std::to_string(a)
                                                 : action_names[i][a]);
        }
        actions.push_back(names);
    }
    doc["actions"] = actions;
    doc["utilities"] = utilities;
    return doc.dump(2);
}

}  // namespace pm
