#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <future>
#include <sstream>
#include <thread>

#include "puzzle_forge/agents.hpp"
#include "puzzle_forge/games.hpp"
#include "puzzle_forge/protocol.hpp"

using namespace pf;
using protocol::Server;

namespace {

json ask(Server& server, protocol::Session& session, const json& request) {
    return json::parse(server.handle(session, request.dump()));
}

}  // namespace

TEST_CASE("reset then score with the oracle transcript gives r_final = 1 for every game and level") {
    Server server({});
    auto session = server.new_session();
    for (auto g : kAllGames) {
        for (int level = 1; level <= 5; ++level) {
            const auto reset = ask(server, session, {{"cmd", "reset"}, {"game", to_string(g)}, {"level", level}, {"seed", 5}});
            REQUIRE(reset.contains("episode_id"));
            CHECK(reset.at("prompt") == generate(g, level, 5).prompt);
            const auto inst = generate(g, level, 5);
            const auto score = ask(server, session,
                                   {{"cmd", "score"},
                                    {"episode_id", reset.at("episode_id")},
                                    {"transcript", agents::transcript({agents::Kind::oracle}, inst, 0)}});
            CHECK(score.at("r_final") == 1);
            CHECK(score.at("game") == to_string(g));
        }
    }
    CHECK(session.outstanding() == 0);
}

TEST_CASE("errors keep the session alive") {
    Server server({});
    auto session = server.new_session();
    CHECK(ask(server, session, {{"cmd", "nope"}}).at("error") == "unknown_cmd");
    CHECK(json::parse(server.handle(session, "{not json")).at("error") == "bad_json");
    CHECK(json::parse(server.handle(session, "[1]")).at("error") == "bad_request");
    CHECK(ask(server, session, {{"cmd", "reset"}, {"game", "chess"}}).at("error") == "unknown_game");
    CHECK(ask(server, session, {{"cmd", "reset"}, {"game", "sudoku"}, {"level", 9}}).at("error") == "bad_request");
    CHECK(ask(server, session, {{"cmd", "reset"}, {"game", "sudoku"}, {"level", "one"}}).at("error") == "bad_request");
    CHECK(ask(server, session, {{"cmd", "score"}, {"episode_id", "x"}, {"transcript", ""}}).at("error") ==
          "unknown_episode");
    CHECK(ask(server, session, {{"cmd", "score"}}).at("error") == "bad_request");
    CHECK(session.open());
    const auto ok = ask(server, session, {{"cmd", "reset"}, {"game", "sudoku"}, {"level", 1}, {"seed", 5}});
    CHECK(ok.contains("episode_id"));
    // A scored episode cannot be scored twice.
    CHECK_FALSE(ask(server, session, {{"cmd", "score"}, {"episode_id", ok.at("episode_id")}, {"transcript", ""}}).contains("error"));
    CHECK(ask(server, session, {{"cmd", "score"}, {"episode_id", ok.at("episode_id")}, {"transcript", ""}}).at("error") ==
          "unknown_episode");
}

TEST_CASE("stdio transport") {
    Server server({});
    std::istringstream in(
        "{\"cmd\":\"reset\",\"game\":\"knights_knaves\",\"level\":1,\"seed\":3}\n\n{\"cmd\":\"nope\"}\n{\"cmd\":\"bye\"}\n"
        "{\"cmd\":\"nope\"}\n");
    std::ostringstream out;
    server.serve_stream(in, out);
    std::istringstream lines(out.str());
    std::string line;
    std::vector<json> responses;
    while (std::getline(lines, line)) responses.push_back(json::parse(line));
    REQUIRE(responses.size() == 3);
    CHECK(responses[0].at("episode_id") == "s0-e0");
    CHECK(responses[1].at("error") == "unknown_cmd");
    CHECK(responses[2].at("bye") == true);
}

TEST_CASE("auto curriculum sessions share state") {
    protocol::ServerConfig config;
    config.curriculum.window = 10;
    config.curriculum.games = {GameId::knights_knaves};
    Server server(config);
    auto a = server.new_session();
    auto b = server.new_session();
    bool advanced = false;
    for (int i = 0; i < 10; ++i) {
        auto& s = i % 2 ? a : b;
        const auto reset = ask(server, s, {{"cmd", "reset"}, {"curriculum", "auto"}});
        REQUIRE(reset.contains("episode_id"));
        CHECK(reset.at("level") == 1);
        const auto inst = generate(GameId::knights_knaves, 1, reset.at("seed").get<std::uint64_t>());
        const auto score = ask(server, s,
                               {{"cmd", "score"},
                                {"episode_id", reset.at("episode_id")},
                                {"transcript", agents::transcript({agents::Kind::oracle}, inst, 0)}});
        advanced = score.at("curriculum").at("advanced").get<bool>();
    }
    CHECK(advanced);
    CHECK(ask(server, a, {{"cmd", "reset"}, {"curriculum", "auto"}}).at("level") == 2);
    CHECK(server.curriculum_checkpoint().at("games").at("knights_knaves").at("level") == 2);
    CHECK(ask(server, a, {{"cmd", "reset"}, {"curriculum", "manual"}}).at("error") == "bad_request");
}

TEST_CASE("tcp transport serves concurrent sessions") {
    Server server({});
    std::atomic<bool> stop{false};
    std::promise<std::uint16_t> ready;
    std::thread listener([&] { server.serve_tcp("127.0.0.1", 0, stop, [&](std::uint16_t p) { ready.set_value(p); }); });
    const auto port = ready.get_future().get();

    auto client = [&](int game_index) {
        const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) return json();
        const auto g = kAllGames[static_cast<std::size_t>(game_index)];
        const std::string req = json{{"cmd", "reset"}, {"game", to_string(g)}, {"level", 1}, {"seed", 2}}.dump() + "\n" +
                                R"({"cmd":"nope"})" + "\n";
        ::send(fd, req.data(), req.size(), 0);
        std::string received;
        char buf[4096];
        while (std::count(received.begin(), received.end(), '\n') < 2) {
            const auto n = ::recv(fd, buf, sizeof buf, 0);
            if (n <= 0) break;
            received.append(buf, static_cast<std::size_t>(n));
        }
        ::close(fd);
        return json::parse(received.substr(0, received.find('\n')));
    };
    auto f1 = std::async(std::launch::async, client, 0);
    auto f2 = std::async(std::launch::async, client, 5);
    const auto r1 = f1.get(), r2 = f2.get();
    stop = true;
    listener.join();
    CHECK(r1.at("game") == "sudoku");
    CHECK(r2.at("game") == "graph_connectivity");
    CHECK(r1.at("episode_id") != nullptr);
}
