from cursedsig import (BEER_QUICHE_SEMI_SEPARATING, beer_quiche_game, enumerate_pure_cse, solve_support_cse,
                       survives_cursed_intuitive, survives_standard_intuitive)

game = beer_quiche_game()

# Both types drink quiche; the standard criterion rules this out whatever chi is.
pooling = [r for r in enumerate_pure_cse(game, 0.6) if r.kind == 'pooling'][0]
print(pooling.profile, survives_standard_intuitive(game, pooling).passed,
      survives_cursed_intuitive(game, pooling).passed)
assert pooling.profile == ('Quiche', 'Quiche')
assert not survives_standard_intuitive(game, pooling).passed
assert survives_cursed_intuitive(game, pooling).passed

[semi] = solve_support_cse(game, 0.0, BEER_QUICHE_SEMI_SEPARATING)
print(semi.sender.row('weak'), semi.receiver.matrix[0])
assert abs(semi.sender.row('weak')[0] - 3 / 8) < 1e-8
assert abs(semi.receiver.matrix[0][0] - 1 / 2) < 1e-8
