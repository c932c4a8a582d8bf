"""The verify command as a library call.

`verify --space cp --n 3 --tube 1 0.4 --suite spectra,rigidity` runs the
same code as below; the JSON report echoes the configuration and is
byte-identical whatever the thread count.
"""

from kahlercheck import cli

config = cli.RunConfig(space="cp", n=3, geometry="tube", geometry_params=(1.0, 0.4), suites=("spectra", "rigidity"), threads=2)
report = cli.run(config)
print(cli.report_csv(report), end="")
print("counts:", report.counts())
same = cli.run(cli.RunConfig(**{**config.__dict__, "threads": 1})).to_json() == report.to_json()
print("identical report with 1 thread:", same)
