#include "doctest.h"

#include "subforge/certify.hpp"
#include "subforge/patterns.hpp"

using namespace subforge;

namespace {

HostGraph petersen() {
    return HostGraph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
                          {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},
                          {5, 7}, {7, 9}, {5, 8}, {6, 8}, {6, 9}});
}

SubdivisionCertificate c9_k3_cert() {
    SubdivisionCertificate cert;
    cert.mode = CertMode::make_balanced(2);
    cert.branch_map = {{0, 0}, {1, 3}, {2, 6}};
    cert.edge_paths[{0, 1}] = Path({0, 1, 2, 3});
    cert.edge_paths[{0, 2}] = Path({0, 8, 7, 6});
    cert.edge_paths[{1, 2}] = Path({3, 4, 5, 6});
    return cert;
}

} // namespace

TEST_CASE("verify accepts the three arcs of C9 as a balanced K3 subdivision") {
    auto c9 = make_cycle(9);
    auto k3 = make_clique(3);
    CHECK(verify_subdivision(c9, k3, c9_k3_cert()).accepted);
}

TEST_CASE("verify rejects a wrong-length arc") {
    auto c9 = make_cycle(9);
    auto k3 = make_clique(3);
    auto cert = c9_k3_cert();
    cert.edge_paths[{1, 2}] = Path({3, 2, 1, 0, 8}); // 4 edges, wrong endpoint too
    CHECK_FALSE(verify_subdivision(c9, k3, cert).accepted);
}

TEST_CASE("verify rejects shared internal vertices") {
    auto k5 = make_clique(5);
    auto p3 = make_path(3); // edges 0-1, 1-2
    SubdivisionCertificate cert;
    cert.mode = CertMode::make_balanced(1);
    cert.branch_map = {{0, 0}, {1, 1}, {2, 2}};
    cert.edge_paths[{0, 1}] = Path({0, 3, 1});
    cert.edge_paths[{1, 2}] = Path({1, 3, 2}); // reuses 3
    auto verdict = verify_subdivision(k5, p3, cert);
    CHECK_FALSE(verdict.accepted);
    CHECK(verdict.violation.find("reused") != std::string::npos);
}

TEST_CASE("verify rejects interiors that hit branch images") {
    auto k5 = make_clique(5);
    auto p3 = make_path(3);
    SubdivisionCertificate cert;
    cert.mode = CertMode::make_balanced(1);
    cert.branch_map = {{0, 0}, {1, 1}, {2, 2}};
    cert.edge_paths[{0, 1}] = Path({0, 2, 1}); // interior = image of vertex 2
    cert.edge_paths[{1, 2}] = Path({1, 3, 2});
    CHECK_FALSE(verify_subdivision(k5, p3, cert).accepted);
}

TEST_CASE("verify is total on malformed certificates") {
    auto k4 = make_clique(4);
    auto k3 = make_clique(3);
    SubdivisionCertificate cert; // everything missing
    CHECK_FALSE(verify_subdivision(k4, k3, cert).accepted);

    cert.branch_map = {{0, 99}, {1, 1}, {2, 2}};
    CHECK_FALSE(verify_subdivision(k4, k3, cert).accepted);

    cert.branch_map = {{0, 1}, {1, 1}, {2, 2}};
    CHECK_FALSE(verify_subdivision(k4, k3, cert).accepted); // not injective

    cert.branch_map = {{0, 0}, {1, 1}, {2, 2}};
    cert.edge_paths[{0, 1}] = Path({0, 1});
    cert.edge_paths[{0, 2}] = Path(std::vector<Vertex>{});
    cert.edge_paths[{1, 2}] = Path({1, 2});
    CHECK_FALSE(verify_subdivision(k4, k3, cert).accepted); // empty path
}

TEST_CASE("oracle finds and refutes balanced triangles in K33") {
    auto k33 = make_complete_bipartite(3, 3);
    auto k3 = make_clique(3);
    auto found = brute_force_subdivision(k33, k3, CertMode::make_balanced(1));
    REQUIRE(found.certificate.has_value());
    CHECK(verify_subdivision(k33, k3, *found.certificate).accepted);

    auto none = brute_force_subdivision(k33, k3, CertMode::make_balanced(0));
    CHECK_FALSE(none.certificate.has_value());
    CHECK(none.exhausted); // bipartite: no triangle, certified
}

TEST_CASE("oracle finds a 6-cycle in the Petersen graph") {
    auto g = petersen();
    auto k3 = make_clique(3);
    auto found = brute_force_subdivision(g, k3, CertMode::make_balanced(1));
    REQUIRE(found.certificate.has_value());
    CHECK(verify_subdivision(g, k3, *found.certificate).accepted);
}

TEST_CASE("oracle guard rejects oversized instances") {
    auto g = make_erdos_renyi(13, 0.5, 1);
    auto k3 = make_clique(3);
    CHECK_THROWS_AS(brute_force_subdivision(g, k3, CertMode::make_balanced(1)),
                    std::invalid_argument);
}

TEST_CASE("certificate JSON round-trips bit-exactly") {
    auto cert = c9_k3_cert();
    std::string text = certificate_to_json(cert);
    auto back = certificate_from_json(text);
    CHECK(back.mode == cert.mode);
    CHECK(back.branch_map == cert.branch_map);
    CHECK(back.edge_paths.size() == cert.edge_paths.size());
    for (auto &[e, p] : cert.edge_paths)
        CHECK(back.edge_paths.at(e) == p);
    CHECK(certificate_to_json(back) == text);
}

TEST_CASE("bounded mode accepts shorter paths only") {
    auto c9 = make_cycle(9);
    auto k3 = make_clique(3);
    auto cert = c9_k3_cert();
    cert.mode = CertMode::make_bounded(2);
    CHECK(verify_subdivision(c9, k3, cert).accepted);
    cert.mode = CertMode::make_bounded(1);
    CHECK_FALSE(verify_subdivision(c9, k3, cert).accepted);
}
