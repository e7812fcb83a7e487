"""A collection of utilities at ``clinrisk.utils``.

* :ref:`clinrisk.utils.functional`
* :ref:`clinrisk.utils.logging_config`
* :ref:`clinrisk.utils.streams`
"""

__doc_title__ = "Utilities"
