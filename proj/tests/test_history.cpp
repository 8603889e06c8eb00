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
#include "duocheck/errors.hpp"
#include "duocheck/history.hpp"

namespace duocheck {
namespace {

using namespace ev;

const TObjectId X{"X"};
const TObjectId Y{"Y"};

TEST(Validate, Fig1IsValid) {
    History h = paper_history("fig1");
    EXPECT_EQ(h.txns(), (std::vector<TxnId>{TxnId{1}, TxnId{2}, TxnId{3}, TxnId{4}}));
    EXPECT_EQ(h.size(), 18u);
}

TEST(Validate, EmptyIsValid) {
    ValidationResult r = validate({});
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.history->empty());
    EXPECT_TRUE(r.history->is_sequential());
    EXPECT_TRUE(r.history->is_t_complete());
}

TEST(Validate, SecondInvocationWhilePending) {
    ValidationResult r = validate({inv_read(1, "X"), inv_read(1, "Y")});
    ASSERT_FALSE(r.ok());
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].index, 1u);
    EXPECT_NE(r.violations[0].reason.find("pending response"), std::string::npos);
}

TEST(Validate, RejectsMalformedSequences) {
    EXPECT_FALSE(validate({res_read(1, "X", 0)}).ok());                                  // no invocation
    EXPECT_FALSE(validate({inv_read(1, "X"), res_write(1, "X", 1)}).ok());               // wrong action
    EXPECT_FALSE(validate({inv_tryc(1), res_commit(1), inv_read(1, "X")}).ok());         // after commit
    EXPECT_FALSE(validate({inv_read(0, "X")}).ok());                                     // T0
    EXPECT_FALSE(validate({inv_trya(1), Event{TxnId{1}, Phase::response, Action::try_abort(), Value::commit()}}).ok());
    EXPECT_FALSE(validate({inv_read(1, ""), res_read(1, "", 0)}).ok());
    EXPECT_FALSE(validate({inv_read(1, "X"), res_read(1, "X", 0), inv_read(1, "X"), res_read(1, "X", 0)}).ok());
    EXPECT_THROW(make_history({res_commit(1)}), Error);
}

TEST(Validate, AbortResponsesEndTheTransaction) {
    EXPECT_TRUE(validate({inv_read(1, "X"), res_read_abort(1, "X")}).ok());
    EXPECT_FALSE(validate({inv_read(1, "X"), res_read_abort(1, "X"), inv_tryc(1)}).ok());
    EXPECT_TRUE(validate({inv_write(1, "X", 3), res_write_abort(1, "X", 3)}).ok());
    EXPECT_TRUE(validate({inv_trya(1), res_trya(1)}).ok());
}

TEST(Prefix, Fig3PrefixIsHPrime) {
    History full = paper_history("fig3_full");
    EXPECT_EQ(prefix(full, 4), paper_history("fig3_prefix"));
    EXPECT_TRUE(prefix(full, 0).empty());
    EXPECT_EQ(prefix(full, full.size()), full);
    EXPECT_THROW(prefix(full, full.size() + 1), OutOfRange);
}

TEST(Projection, Fig1T2) {
    History h = paper_history("fig1");
    EXPECT_EQ(projection(h, TxnId{2}),
              (std::vector<Event>{inv_write(2, "X", 1), res_write(2, "X", 1), inv_tryc(2), res_commit(2)}));
    EXPECT_TRUE(projection(h, TxnId{9}).empty());
}

TEST(Status, ReferenceTransactions) {
    EXPECT_EQ(status(fig2_prefix(2), TxnId{1}), TxnStatus::commit_pending);
    EXPECT_EQ(status(paper_history("fig4"), TxnId{1}), TxnStatus::aborted);
    EXPECT_EQ(status(paper_history("fig4"), TxnId{3}), TxnStatus::committed);
    EXPECT_EQ(status(paper_history("fig3_prefix"), TxnId{2}), TxnStatus::complete_not_t_complete);
    EXPECT_EQ(status(make_history({inv_read(1, "X")}), TxnId{1}), TxnStatus::op_incomplete);
    EXPECT_THROW(status(paper_history("fig4"), TxnId{7}), UnknownTxn);
}

TEST(RealTime, Fig1) {
    History h = paper_history("fig1");
    EXPECT_TRUE(real_time_precedes(h, TxnId{2}, TxnId{1}));
    EXPECT_FALSE(real_time_precedes(h, TxnId{3}, TxnId{1}));
    EXPECT_FALSE(real_time_precedes(h, TxnId{1}, TxnId{3}));
    EXPECT_TRUE(overlap(h, TxnId{1}, TxnId{3}));
    EXPECT_FALSE(real_time_precedes(h, TxnId{1}, TxnId{1}));
    EXPECT_TRUE(real_time_precedes(h, TxnId{1}, TxnId{4}));
}

TEST(RealTime, IncompleteTransactionsPrecedeNothing) {
    // T1 has no tryC, so it never finishes and T2 overlaps it.
    History h = make_history({inv_read(1, "X"), res_read(1, "X", 0), inv_read(2, "X"), res_read(2, "X", 0)});
    EXPECT_FALSE(real_time_precedes(h, TxnId{1}, TxnId{2}));
    EXPECT_TRUE(overlap(h, TxnId{1}, TxnId{2}));
}

TEST(ReadWriteSets, Fig6) {
    History h = paper_history("fig6");
    ReadWriteSets t1 = read_write_sets(h, TxnId{1});
    ReadWriteSets t2 = read_write_sets(h, TxnId{2});
    EXPECT_EQ(t1.read_set, std::set<TObjectId>{X});
    EXPECT_EQ(t1.write_set, std::set<TObjectId>{X});
    EXPECT_EQ(t2.read_set, std::set<TObjectId>{X});
    EXPECT_EQ(t2.write_set, std::set<TObjectId>{Y});

    History ro = make_history({inv_read(1, "X"), res_read(1, "X", 0)});
    EXPECT_FALSE(read_write_sets(ro, TxnId{1}).read_set.empty());
    EXPECT_TRUE(read_write_sets(ro, TxnId{1}).write_set.empty());
}

TEST(LiveSet, Fig1) {
    History h = paper_history("fig1");
    EXPECT_EQ(live_set(h, TxnId{1}), (std::set<TxnId>{TxnId{1}, TxnId{3}}));
    EXPECT_TRUE(ls_precedes(h, TxnId{1}, TxnId{4}));
    EXPECT_FALSE(ls_precedes(h, TxnId{1}, TxnId{3}));

    History single = make_history({inv_tryc(1), res_commit(1)});
    EXPECT_EQ(live_set(single, TxnId{1}), std::set<TxnId>{TxnId{1}});
}

TEST(Visibility, Fig4ReadExcludesLateTryC) {
    ReadVisibility v = visibility_of(paper_history("fig4"), TxnId{2}, X);
    EXPECT_EQ(v.writers, std::set<TxnId>{TxnId{1}});
    EXPECT_EQ(v.value, 1);
}

TEST(Visibility, Fig1LastRead) {
    History h = paper_history("fig1");
    EXPECT_EQ(visibility_of(h, TxnId{4}, X).writers, (std::set<TxnId>{TxnId{1}, TxnId{2}, TxnId{3}}));
    EXPECT_EQ(visibility_of(h, TxnId{1}, X).writers, std::set<TxnId>{TxnId{2}});
    EXPECT_THROW(visibility_of(h, TxnId{2}, X), NoSuchRead);
}

TEST(Visibility, ReadBeforeAnyTryC) {
    History h = make_history({inv_read(1, "X"), res_read(1, "X", 0), inv_tryc(1), res_commit(1)});
    EXPECT_TRUE(visibility_of(h, TxnId{1}, X).writers.empty());
    EXPECT_EQ(visible_writers(h).size(), 1u);
}

// Oracles for the derived history-core properties: direct scans over the event list.

std::set<TObjectId> scan_set(const History& h, TxnId k, OpKind kind) {
    std::set<TObjectId> out;
    for (const Event& e : h.events())
        if (e.txn == k && e.is_invocation() && e.action.kind == kind) out.insert(e.action.object);
    return out;
}

bool scan_precedes(const History& h, TxnId k, TxnId m) {
    std::optional<std::size_t> last_k, first_m;
    bool k_done = false;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Event& e = h[i];
        if (e.txn == k) {
            last_k = i;
            k_done = e.is_response() && e.result && (e.result->is_commit() || e.result->is_abort());
        }
        if (e.txn == m && !first_m) first_m = i;
    }
    return k != m && k_done && last_k && first_m && *last_k < *first_m;
}

class RandomHistories : public ::testing::TestWithParam<int> {};

TEST_P(RandomHistories, AgreeWithDirectScans) {
    HistoryConfig cfg;
    cfg.txn_count = 5;
    cfg.object_count = 2;
    for (Seed seed = 0; seed < 200; ++seed) {
        History h = random_history(cfg, seed * 7919 + static_cast<Seed>(GetParam()));
        std::vector<Event> merged;
        for (TxnId k : h.txns()) {
            std::vector<Event> filtered;
            for (const Event& e : h.events())
                if (e.txn == k) filtered.push_back(e);
            EXPECT_EQ(projection(h, k), filtered);
            ReadWriteSets sets = read_write_sets(h, k);
            EXPECT_EQ(sets.read_set, scan_set(h, k, OpKind::read));
            EXPECT_EQ(sets.write_set, scan_set(h, k, OpKind::write));
            for (TxnId m : h.txns()) {
                EXPECT_EQ(real_time_precedes(h, k, m), scan_precedes(h, k, m));
                if (ls_precedes(h, k, m) && h.txn(k).t_complete()) { EXPECT_TRUE(real_time_precedes(h, k, m)); }
                for (TxnId n : h.txns()) {
                    if (real_time_precedes(h, k, m) && real_time_precedes(h, m, n)) {
                        EXPECT_TRUE(real_time_precedes(h, k, n));
                    }
                }
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomHistories, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace duocheck
