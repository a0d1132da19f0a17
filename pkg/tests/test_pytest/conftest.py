from dg_resolver.contrib.pytest_plugin import dsl_workspace  # noqa: F401
from dg_resolver.contrib.pytest_plugin import setup_algebras  # noqa: F401
