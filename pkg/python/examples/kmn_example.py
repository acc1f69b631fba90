from cursedsig import KMN_HYBRID, enumerate_pure_cse, kmn_game, refine_equilibrium_set, regime, solve_support_cse

game = kmn_game()
chi = 0.65

records = enumerate_pure_cse(game, chi) + solve_support_cse(game, chi, KMN_HYBRID)
records = refine_equilibrium_set(game, chi, records)
for record in records:
    print(record.kind, record.profile, record.sender_payoffs, record.refinement_verdicts)

assert [r.kind for r in records] == ['separating', 'pooling', 'hybrid']
assert all(r.refinement_verdicts['cursed_intuitive'] for r in records)
hybrid = records[-1]
assert abs(hybrid.sender.row('H')[1] - regime(chi).hybrid_invest_prob) < 1e-8
