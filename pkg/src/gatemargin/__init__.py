"""Matchgate circuits, linear threshold gates, and the bridge between them.

The package has three layers:

* core numerics: ``matchgates``, ``dense``, ``ltg``, ``synthesis``, ``wms``
  (pure functions over immutable values),
* a verification suite (``verify``) exercising the cross-module identities,
* a FastAPI service (``gatemargin.service``) plus a thin CLI client
  (``gatemargin.cli``) exposing everything over JSON.
"""

from gatemargin.errors import CapacityError

__version__ = "0.1.0"

__all__ = ["CapacityError", "__version__"]
