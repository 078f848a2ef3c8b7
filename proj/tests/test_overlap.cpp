/*
   Copyright 2026 The skelforge Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <sstream>

#include <skelforge/error.hpp>
#include <skelforge/overlap.hpp>
#include <skelforge/skeleton.hpp>

#include "support/fixtures.hpp"

using namespace skelforge;

namespace {

FlaggedMatrix two_tools() {
    FlaggedMatrix m;
    m.tools = {"a", "b"};
    m.swc["a"] = {107};
    m.swc["b"] = {107};
    m.flagged["a"][107] = {"x", "y"};
    m.flagged["b"][107] = {"y"};
    return m;
}

}  // namespace

TEST_CASE("pairwise overlap") {
    const auto m = two_tools();
    CHECK(overlap("a", "b", m) == 50.0);
    CHECK(overlap("b", "a", m) == 100.0);
    CHECK(overlap("a", "a", m) == 100.0);
    CHECK_THROWS_AS(overlap("a", "zz", m), LookupError);

    auto disjoint = m;
    disjoint.swc["b"] = {101};
    disjoint.flagged["b"] = {{101, {"y"}}};
    CHECK_FALSE(overlap("a", "b", disjoint));

    // Shared class, but a flags nothing in it.
    auto zero = m;
    zero.flagged["a"][107].clear();
    CHECK_FALSE(overlap("a", "b", zero));
    CHECK(overlap("b", "a", zero) == 0.0);
}

TEST_CASE("overlap matrix") {
    const auto om = overlap_matrix(two_tools());
    CHECK(om.tools == std::vector<std::string>{"a", "b"});
    CHECK(om.values == std::vector<std::vector<Percent>>{{100.0, 50.0}, {100.0, 100.0}});

    FlaggedMatrix single;
    single.tools = {"s"};
    single.swc["s"] = {101};
    single.flagged["s"][101] = {"q"};
    CHECK(overlap_matrix(single).values == std::vector<std::vector<Percent>>{{100.0}});

    auto m = two_tools();
    m.tools.push_back("c");
    m.swc["c"] = {999};
    std::ostringstream out;
    write_overlap_csv(out, overlap_matrix(m));
    CHECK(out.str() == "tool,a,b,c\na,100.0,50.0,\nb,100.0,100.0,\nc,,,\n");
}

TEST_CASE("asymmetry when one tool subsumes the other") {
    FlaggedMatrix m;
    m.tools = {"big", "small"};
    m.swc["big"] = {101, 107};
    m.swc["small"] = {101, 114};
    for (int i = 0; i < 20; ++i) m.flagged["big"][101].insert("c" + std::to_string(i));
    for (int i = 0; i < 12; ++i) m.flagged["small"][101].insert("c" + std::to_string(i));
    m.flagged["small"][114] = {"z"};
    CHECK(overlap("small", "big", m) == 100.0);
    CHECK(*overlap("big", "small", m) == doctest::Approx(60.0));
}

TEST_CASE("agreement breakdown") {
    FlaggedMatrix one;
    one.tools = {"a"};
    one.swc["a"] = {101};
    one.flagged["a"][101] = {"x", "y"};
    auto rows = agreement_breakdown(one, 101);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].shares() == std::array<double, 4>{100.0, 0.0, 0.0, 0.0});

    FlaggedMatrix three;
    three.tools = {"a", "b", "c"};
    for (const auto& t : three.tools) {
        three.swc[t] = {101};
        three.flagged[t][101] = {"x"};
    }
    rows = agreement_breakdown(three, 101);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(r.shares() == std::array<double, 4>{0.0, 0.0, 100.0, 0.0});

    CHECK_THROWS_AS(agreement_breakdown(three, 555), LookupError);
    CHECK_THROWS_AS(agreement_breakdown(three, 101, {"nobody"}), LookupError);
    rows = agreement_breakdown(three, 101, {"a", "b"});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].counts[1] == 1);

    three.flagged["a"][101].clear();
    rows = agreement_breakdown(three, 101);
    CHECK_FALSE(rows[0].shares());

    std::ostringstream out;
    write_agreement_csv(out, agreement_breakdown(one, 101));
    CHECK(out.str() == "tool,swc_class,share_1,share_2,share_3,share_4plus\na,SWC-101,100.0,0.0,0.0,0.0\n");
}

TEST_CASE("jaccard") {
    FlaggedMatrix m;
    m.tools = {"a", "b"};
    m.swc["a"] = {107, 101};
    m.swc["b"] = {107};
    m.flagged["a"][107] = {"x", "y"};
    m.flagged["a"][101] = {"q"};
    m.flagged["b"][107] = {"y", "z"};
    CHECK(*jaccard("a", "b", m, 107) == doctest::Approx(100.0 / 3));
    CHECK(*jaccard("a", "b", m) == doctest::Approx(100.0 / 3));  // 101 is not shared
    CHECK(jaccard("a", "a", m) == 100.0);
    CHECK_THROWS_AS(jaccard("a", "b", m, 101), LookupError);
    m.flagged["a"][107].clear();
    m.flagged["b"][107].clear();
    CHECK_FALSE(jaccard("a", "b", m, 107));
}

TEST_CASE("random fixtures against brute force") {
    testing::Rng rng(47);
    for (int round = 0; round < 100; ++round) {
        const auto m = testing::random_matrix(rng, 2 + rng() % 5, 1 + rng() % 4, 1 + rng() % 15);
        for (const auto& a : m.tools) {
            const auto self = overlap(a, a, m);
            std::size_t own = 0;
            for (const auto s : m.swc.at(a)) own += m.get(a, s).size();
            if (own > 0) CHECK(self == 100.0);
            for (const auto& b : m.tools) {
                const auto got = overlap(a, b, m);
                const auto want = testing::overlap_oracle(m, a, b);
                REQUIRE(got.has_value() == want.has_value());
                if (got) CHECK(*got == doctest::Approx(*want));
                bool shared = false;
                for (const auto s : m.swc.at(a)) shared = shared || m.swc.at(b).count(s);
                if (shared) {
                    const auto j = jaccard(a, b, m);
                    const auto jw = testing::jaccard_oracle(m, a, b, std::nullopt);
                    REQUIRE(j.has_value() == jw.has_value());
                    if (j) CHECK(*j == doctest::Approx(*jw));
                } else {
                    CHECK_THROWS_AS(jaccard(a, b, m), LookupError);
                }
            }
        }
        for (const auto s : m.all_classes()) {
            for (const auto& row : agreement_breakdown(m, s)) {
                CHECK(row.counts == testing::breakdown_oracle(m, row.tool, s));
                std::size_t sum = 0;
                for (const auto c : row.counts) sum += c;
                CHECK(sum == row.total);
                if (const auto sh = row.shares()) {
                    double total = 0;
                    for (const auto v : *sh) total += v;
                    CHECK(std::abs(total - 100.0) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("adding a code to both tools never lowers overlap") {
    testing::Rng rng(53);
    for (int round = 0; round < 100; ++round) {
        auto m = testing::random_matrix(rng, 2, 2, 8);
        const auto& a = m.tools[0];
        const auto& b = m.tools[1];
        std::vector<SwcClass> shared;
        for (const auto s : m.swc.at(a)) {
            if (m.swc.at(b).count(s)) shared.push_back(s);
        }
        if (shared.empty()) continue;
        const auto before_ab = overlap(a, b, m);
        const auto before_ba = overlap(b, a, m);
        const auto s = shared[rng() % shared.size()];
        m.flagged[a][s].insert("fresh");
        m.flagged[b][s].insert("fresh");
        if (before_ab) CHECK(*overlap(a, b, m) >= *before_ab - 1e-9);
        if (before_ba) CHECK(*overlap(b, a, m) >= *before_ba - 1e-9);
        CHECK(overlap(a, b, m).has_value());
    }
}

TEST_CASE("subset and mutual-100 laws") {
    testing::Rng rng(59);
    for (int round = 0; round < 100; ++round) {
        auto m = testing::random_matrix(rng, 2, 3, 10);
        const auto a = m.tools[0];
        const auto b = m.tools[1];
        // Make a's sets subsets of b's on shared classes.
        for (const auto s : m.swc.at(a)) {
            if (!m.swc.at(b).count(s)) continue;
            auto& sa = m.flagged[a][s];
            auto& sb = m.flagged[b][s];
            sb.insert(sa.begin(), sa.end());
        }
        const auto ab = overlap(a, b, m);
        if (ab) CHECK(*ab == 100.0);
        const auto ba = overlap(b, a, m);
        bool equal = true;
        for (const auto s : m.swc.at(a)) {
            if (m.swc.at(b).count(s) && m.get(a, s) != m.get(b, s)) equal = false;
        }
        if (ab && ba) CHECK((*ba == 100.0) == equal);
    }
}

TEST_CASE("timelines over families") {
    std::string text;
    const std::vector<std::pair<std::string, int>> codes{
        {"5b01", 5}, {"5b02", 10}, {"5b03", 150'000}, {"5b04", 160'000}, {"5b05", 350'000}};
    for (const auto& [hex, block] : codes) {
        text += R"({"block": )" + std::to_string(block) + R"(, "code_ref": "0x)" + hex + "\"}\n";
    }
    std::istringstream in(text);
    const auto corpus = ingest(in, IngestOptions{}).corpus;
    const auto fams = cluster(corpus);
    const FamilyIndex idx(fams);
    const auto id = [](const char* hex) { return skeleton_digest(from_hex(hex)); };

    FlaggedMatrix m;
    m.tools = {"a", "b", "c"};
    for (const auto& t : m.tools) m.swc[t] = {101};
    // bin 0: both codes flagged by a and b. bin 1: one by a only, one by all three.
    m.flagged["a"][101] = {id("5b01"), id("5b02"), id("5b03"), id("5b04")};
    m.flagged["b"][101] = {id("5b01"), id("5b02"), id("5b04")};
    m.flagged["c"][101] = {id("5b04")};

    const auto t = overlap_timeline(m, idx, 101);
    REQUIRE(t.size() == 4);
    CHECK(t[0].flagged == 2);
    CHECK(t[0].shares() == std::array<double, 4>{0.0, 100.0, 0.0, 0.0});
    CHECK(t[1].shares() == std::array<double, 4>{50.0, 0.0, 50.0, 0.0});
    CHECK(t[2].codes == 0);
    CHECK_FALSE(t[2].flagged_percent());
    CHECK_FALSE(t[2].shares());
    CHECK(t[3].flagged_percent() == 0.0);

    std::ostringstream out;
    write_overlap_timeline_csv(out, t);
    CHECK(out.str() ==
          "bin_index,numerator,denominator,percentage,share_1,share_2,share_3,share_4plus\n"
          "0,2,2,100.0,0.0,100.0,0.0,0.0\n"
          "1,2,2,100.0,50.0,0.0,50.0,0.0\n"
          "2,0,0,,,,,\n"
          "3,0,1,0.0,,,,\n");

    const auto j = jaccard_timeline("a", "b", m, idx, 101);
    REQUIRE(j.size() == 4);
    CHECK(j[0].per_bin() == 100.0);
    CHECK(j[1].per_bin() == 50.0);
    CHECK(*j[1].cumulative() == doctest::Approx(75.0));
    CHECK_FALSE(j[2].per_bin());
    CHECK(*j[3].cumulative() == doctest::Approx(75.0));
}
