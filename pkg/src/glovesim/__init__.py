"""glovesim: software twin of an RFID tag-reader glove.

Core pieces: a tag-to-audio store (:mod:`glovesim.tagdb`), the device
control loop (:mod:`glovesim.device`), a 2D RF read model
(:mod:`glovesim.rfmodel`), table-top scene builders (:mod:`glovesim.scene`),
a synthetic participant (:mod:`glovesim.agent`), trial scoring and the
statistics battery (:mod:`glovesim.metrics`), a duty-cycle energy model
(:mod:`glovesim.energy`), and a session service plus CLI
(:mod:`glovesim.service`, :mod:`glovesim.cli`).
"""

__version__ = "0.1.0"
