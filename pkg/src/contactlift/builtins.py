"""Built-in scenario texts exercising the main verification workflows.

Each entry maps a name to (description, TOML text).  The texts go through
the same parser as user files, so they double as format references.
"""

BUILTINS = {}

BUILTINS["standard_box"] = (
    "contact and Reeb checks for dy - z dw, plus local box connectivity",
    '''
name = "standard_box"
variables = ["z", "w", "y"]

[domain]
kind = "product"
factors = [
    {kind = "ball", dim = 2, r = 1.0},
    {kind = "disc", r = 1.0},
]

[samples]
count = 100
seed = 0

[forms.xi]
"d[y]" = "1"
"d[w]" = "-z"

[forms.exact]
"d[y]" = "1"

[[checks]]
id = "contact-volume"
op = "contact_check"
form = "xi"

[[checks]]
id = "reeb-vertical"
op = "reeb_check"
form = "xi"
expected = ["0", "0", "1"]

[[checks]]
id = "exact-form-degenerates"
op = "contact_check"
form = "exact"
expect = "fail"

[[checks]]
id = "connect-to-origin"
op = "local_connect_check"
r = 1.0
point = ["0.2", "0.3", "0.04"]

[[checks]]
id = "linear-disc-bound"
op = "kappa_box_check"
r = 1.0
point = ["0", "0.5", "0"]
direction = ["1", "0", "0"]
expected = "2"
''',
)

BUILTINS["ball_extremal"] = (
    "scale factors of ball automorphisms against the shifted volume form",
    '''
name = "ball_extremal"
variables = ["z", "w"]

[domain]
kind = "ball"
dim = 2
r = 0.9

[samples]
count = 200
seed = 0

[forms.flat]
"d[z]^d[w]" = "1"

[forms.shifted]
"d[z]^d[w]" = "2/(1-z)^3"

[maps.cayley]
components = ["(1+z)/(1-z)", "w/(1-z)"]

[maps.slide_one]
components = ["(1+z+2*w)/(3-z+2*w)", "2*(w+1-z)/(3-z+2*w)"]

[maps.slide_i]
components = ["(1+z-2*i*w)/(3-z-2*i*w)", "2*(w+i-i*z)/(3-z-2*i*w)"]

[maps.fiber_rotation]
components = ["z", "i*w"]

[maps.base_rotation]
components = ["i*z", "w"]

[[checks]]
id = "cayley-pullback"
op = "pullback_matches"
map = "cayley"
form = "flat"
expected = "shifted"

[[checks]]
id = "slide-one-preserves"
op = "scale_factor"
map = "slide_one"
form = "shifted"
expected_lambda = "1"

[[checks]]
id = "slide-i-preserves"
op = "scale_factor"
map = "slide_i"
form = "shifted"
expected_lambda = "1"

[[checks]]
id = "fiber-rotation-scales"
op = "scale_factor"
map = "fiber_rotation"
form = "shifted"
expected_lambda = "i"

[[checks]]
id = "base-rotation-rejected"
op = "scale_factor"
map = "base_rotation"
form = "shifted"
expect = "error"
''',
)

BUILTINS["punctured_family"] = (
    "inequivalent lifts over disc x punctured disc told apart by periods",
    '''
name = "punctured_family"
variables = ["z", "w"]

[domain]
kind = "product"
factors = [
    {kind = "disc", r = 1.0},
    {kind = "punctured_disc", r = 1.0},
]

[samples]
count = 100
seed = 0

[forms.nu]
"d[w]" = "z"

[lifts.plain]
nu = {"d[w]" = "z"}

[lifts.unit]
nu = {"d[w]" = "z"}
twist = {"d[w]" = "-1/w"}

[lifts.half]
nu = {"d[w]" = "z"}
twist = {"d[w]" = "-1/(2*w)"}

[lifts.shifted]
nu = {"d[z]" = "w", "d[w]" = "2*z"}

[maps.winder]
components = ["z*w^2", "-1/w"]

[[loops]]
kind = "circle"
coordinate = "w"
radius = 0.5
base = ["0", "0.5"]

[[checks]]
id = "plain-valid"
op = "validate_lift"
lift = "plain"

[[checks]]
id = "unit-valid"
op = "validate_lift"
lift = "unit"

[[checks]]
id = "half-valid"
op = "validate_lift"
lift = "half"

[[checks]]
id = "theta-unit-vs-plain"
op = "theta_class"
lift = "unit"
other = "plain"
expected = ["-2*pi*i"]

[[checks]]
id = "monodromy-unit"
op = "monodromy"
lift = "unit"
potential = "nu"
expected = "-2*pi*i"

[[checks]]
id = "plain-fits"
op = "is_fit"
lift = "plain"
potential = "nu"
expected = true

[[checks]]
id = "unit-does-not-fit"
op = "is_fit"
lift = "unit"
potential = "nu"
expected = false

[[checks]]
id = "unit-half-obstructed"
op = "are_equivalent"
lift = "unit"
other = "half"
expect = "obstructed"

[[checks]]
id = "exact-shift-equivalent"
op = "are_equivalent"
lift = "plain"
other = "shifted"
expect = "equivalent"

[[checks]]
id = "winder-obstructed-on-unit"
op = "lift_automorphism"
lift = "unit"
map = "winder"
expect = "obstructed"
expected_period = "4*pi*i"

[[checks]]
id = "winder-lifts-on-plain"
op = "lift_automorphism"
lift = "plain"
map = "winder"
expect = "lifted"
''',
)

BUILTINS["lift_metric_equality"] = (
    "horizontal metric equals the base metric on the standard ball lift",
    '''
name = "lift_metric_equality"
variables = ["z", "w"]

[domain]
kind = "ball"
dim = 2
r = 1.0

[samples]
count = 100
seed = 0

[lifts.standard]
nu = {"d[w]" = "z"}

[[checks]]
id = "metric-matches-base"
op = "metric_equality"
lift = "standard"
count = 50

[[checks]]
id = "distance-sandwich"
op = "dist_sandwich"
lift = "standard"
count = 25

[[checks]]
id = "radial-disc-lift"
op = "lift_disc_check"
lift = "standard"
disc = ["t/2", "t/2"]
expected_y = "t^2/8"
''',
)

BUILTINS["pullback_demo"] = (
    "transporting a lift along a shear succeeds; along a collapse it fails",
    '''
name = "pullback_demo"
variables = ["z", "w"]

[domain]
kind = "ball"
dim = 2
r = 1.0

[samples]
count = 100
seed = 0

[lifts.standard]
nu = {"d[w]" = "z"}

[maps.shear]
components = ["z + w^2", "w"]

[maps.collapse]
components = ["z", "z"]

[[checks]]
id = "shear-transports"
op = "pullback_lift_check"
lift = "standard"
map = "shear"

[[checks]]
id = "collapse-degenerates"
op = "pullback_lift_check"
lift = "standard"
map = "collapse"
expect = "error"
error = "DegeneratePullback"
''',
)
