from cursedsig import CostFunction, SpenceModel, equilibrium_wages, pooling_region, riley_selection, separating_region

model = SpenceModel(1.0, 2.0, 0.5, CostFunction.linear())

for chi in (0.0, 0.25, 0.5, 0.75, 1.0):
    separating, pooling = separating_region(model, chi), pooling_region(model, chi)
    wages = equilibrium_wages(model, chi)
    print(f'chi={chi}: separating={separating} pooling={pooling} wages=({wages.w_L}, {wages.w_H})')

chi = 0.5
[survivor] = riley_selection(model, chi)
print(survivor)
assert survivor.kind == 'separating'
assert abs(survivor.e_H - separating_region(model, chi).lo) < 1e-9 and survivor.e_L == 0
assert separating_region(model, 1.0).empty
