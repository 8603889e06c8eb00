/*
 * Copyright 2026 The duocheck Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include "duocheck/corpus.hpp"
#include "duocheck/criteria.hpp"
#include "duocheck/errors.hpp"

namespace duocheck {
namespace {

using namespace ev;

TEST(FinalState, ReferenceHistories) {
    CriterionReport full = final_state_opaque(paper_history("fig3_full"));
    ASSERT_TRUE(full.satisfied());
    EXPECT_EQ(full.verdict.witness->order, (std::vector<TxnId>{TxnId{1}, TxnId{2}}));
    EXPECT_FALSE(final_state_opaque(paper_history("fig3_prefix")).satisfied());
    EXPECT_TRUE(final_state_opaque(History{}).satisfied());
}

TEST(Opacity, Fig4AndFig3) {
    CriterionReport fig4 = opaque(paper_history("fig4"));
    EXPECT_TRUE(fig4.satisfied());
    EXPECT_EQ(fig4.prefixes.size(), paper_history("fig4").size() + 1);
    EXPECT_FALSE(fig4.first_failing_prefix().has_value());

    CriterionReport fig3 = opaque(paper_history("fig3_full"));
    EXPECT_FALSE(fig3.satisfied());
    EXPECT_EQ(fig3.first_failing_prefix(), 4u);
    EXPECT_EQ(fig3.prefix_failures(), std::vector<std::size_t>{4});
}

TEST(Opacity, SingleWriter) {
    History h = make_history({inv_write(1, "X", 1), res_write(1, "X", 1), inv_tryc(1), res_commit(1)});
    EXPECT_TRUE(opaque(h).satisfied());
}

TEST(Opacity, SatisfiedIffEveryPrefixIs) {
    HistoryConfig cfg;
    cfg.txn_count = 4;
    for (Seed s = 0; s < 100; ++s) {
        History h = random_history(cfg, s);
        CriterionReport r = opaque(h);
        bool all = true;
        for (std::size_t i = 0; i <= h.size(); ++i) all = all && final_state_opaque(prefix(h, i)).satisfied();
        EXPECT_EQ(r.satisfied(), all);
        EXPECT_EQ(r.satisfied(), r.prefix_failures().empty());
    }
}

TEST(DuOpacity, ReferenceHistories) {
    EXPECT_TRUE(du_opaque(paper_history("fig1")).satisfied());
    EXPECT_FALSE(du_opaque(paper_history("fig4")).satisfied());
    CriterionReport fig6 = du_opaque(paper_history("fig6"));
    ASSERT_TRUE(fig6.satisfied());
    EXPECT_EQ(fig6.verdict.witness->order, (std::vector<TxnId>{TxnId{2}, TxnId{1}}));
}

// T3 writes the initial value 0 and only invokes tryC at the very end. With T3 committed,
// T1·T3·T2 serializes the whole history: T2's read of 0 is legal in its local serialization
// (initial value) and in the global order (T3's write). Cutting off T3's tryC aborts T3 and
// leaves T1 and T2 needing to precede each other. Reads justified by a different writer of the
// same value are what break prefix closure; with distinct nonzero values this cannot happen.
TEST(DuOpacity, PrefixClosureFailsOnRepeatedValues) {
    History h = make_history({inv_read(1, "X"), res_read(1, "X", 0), inv_write(3, "X", 0), res_write(3, "X", 0),
                              inv_read(2, "X"), res_read(2, "X", 0), inv_write(2, "X", 2), res_write(2, "X", 2),
                              inv_tryc(2), res_commit(2), inv_write(1, "X", 1), res_write(1, "X", 1), inv_tryc(1),
                              res_commit(1), inv_tryc(3)});
    CheckOptions naive{Engine::naive, std::nullopt};
    for (const CheckOptions& o : {CheckOptions{}, naive}) {
        CriterionReport du = du_opaque(h, o);
        ASSERT_TRUE(du.satisfied());
        EXPECT_EQ(du.verdict.witness->order, (std::vector<TxnId>{TxnId{1}, TxnId{3}, TxnId{2}}));
        History cut = prefix(h, h.size() - 1);
        EXPECT_FALSE(du_opaque(cut, o).satisfied());
        EXPECT_FALSE(final_state_opaque(cut, o).satisfied());
        EXPECT_FALSE(opaque(h, o).satisfied());
    }
    EXPECT_FALSE(unique_writes(h));
}

TEST(Ghs, Fig5) {
    EXPECT_FALSE(ghs_opaque(paper_history("fig5")).satisfied());
    CriterionReport du = du_opaque(paper_history("fig5"));
    ASSERT_TRUE(du.satisfied());
    EXPECT_EQ(du.verdict.witness->order, (std::vector<TxnId>{TxnId{1}, TxnId{3}, TxnId{2}}));
    EXPECT_THROW(ghs_opaque(paper_history("fig1")), NotSequential);
}

TEST(Ghs, NoCommittedWritersReducesToFinalState) {
    HistoryConfig cfg;
    cfg.txn_count = 4;
    std::size_t checked = 0;
    for (Seed s = 0; s < 400; ++s) {
        History h = random_history(cfg, s);
        if (!h.is_sequential()) continue;
        bool writers = false;
        for (const TxnInfo& t : h.txn_infos()) writers = writers || (t.status == TxnStatus::committed && !t.write_set.empty());
        if (writers) continue;
        ++checked;
        EXPECT_EQ(ghs_opaque(h).satisfied(), final_state_opaque(h).satisfied());
    }
    std::vector<Event> e = {inv_read(1, "X"), res_read(1, "X", 0), inv_tryc(1), res_commit(1),
                            inv_read(2, "X"), res_read(2, "X", 0)};
    EXPECT_EQ(ghs_opaque(make_history(e)).satisfied(), final_state_opaque(make_history(e)).satisfied());
}

TEST(Tms2, Fig6) {
    EXPECT_FALSE(tms2_order(paper_history("fig6")).satisfied());
    EXPECT_TRUE(du_opaque(paper_history("fig6")).satisfied());
}

TEST(Tms2, ConflictFreeReducesToFinalState) {
    HistoryConfig cfg;
    cfg.txn_count = 4;
    for (Seed s = 0; s < 200; ++s) {
        History h = random_history(cfg, s);
        bool conflict = false;
        for (const TxnInfo& a : h.txn_infos())
            for (const TxnInfo& b : h.txn_infos())
                for (const TObjectId& x : a.write_set) conflict = conflict || (a.id != b.id && b.read_set.contains(x));
        if (conflict) continue;
        EXPECT_EQ(tms2_order(h).satisfied(), final_state_opaque(h).satisfied());
    }
}

TEST(UniqueWrites, ReferenceHistories) {
    EXPECT_FALSE(unique_writes(paper_history("fig4")));
    EXPECT_TRUE(unique_writes(paper_history("fig6")));
    EXPECT_TRUE(unique_writes(History{}));
    EXPECT_FALSE(unique_writes(make_history({inv_write(1, "X", 0), res_write(1, "X", 0)})));
    // The same transaction may overwrite its own value.
    EXPECT_TRUE(unique_writes(
        make_history({inv_write(1, "X", 2), res_write(1, "X", 2), inv_write(1, "X", 2), res_write(1, "X", 2)})));
}

TEST(Names, RoundTrip) {
    for (NamedCriterion c : {NamedCriterion::final_state, NamedCriterion::opacity, NamedCriterion::du_opacity,
                             NamedCriterion::ghs, NamedCriterion::tms2}) {
        EXPECT_EQ(parse_criterion(to_string(c)), c);
    }
    EXPECT_FALSE(parse_criterion("strict").has_value());
}

TEST(Engines, NaiveAndPrunedAgreeOnOpacity) {
    HistoryConfig cfg;
    cfg.txn_count = 4;
    CheckOptions naive{Engine::naive, std::nullopt};
    for (Seed s = 0; s < 100; ++s) {
        History h = random_history(cfg, s);
        EXPECT_EQ(opaque(h).prefix_failures(), opaque(h, naive).prefix_failures()) << s;
    }
}

}  // namespace
}  // namespace duocheck
