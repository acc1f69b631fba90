import math

from cursedsig import ContinuumModel, incentive_check, separating_schedule, wage_compression_report

model = ContinuumModel.from_mean(1.0, 2.0)

for row in wage_compression_report(model, [0.0, 0.5, 0.9]):
    print(row)

chi = 0.5
schedule = separating_schedule(model, chi)
print(schedule.education([1.0, 2.0, 3.0]), schedule.wage([1.0, 2.0, 3.0]))
assert abs(schedule.education(2.0) - math.sqrt(0.5 * 1.5)) < 1e-12
assert abs(schedule.wage(3.0) - 2.5) < 1e-12
check = incentive_check(model, chi, 2.5)
assert abs(check.best_type - 2.5) <= check.step
