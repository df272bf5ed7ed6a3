"""Exception types raised across spikelens."""


class SpikelensError(ValueError):
    """Base class for every error raised by this package."""


# dataset_io
class WrongMagic(SpikelensError):
    pass


class TruncatedFile(SpikelensError):
    pass


class LabelOutOfRange(SpikelensError):
    pass


class UnsupportedFormat(SpikelensError):
    pass


class MissingLabels(SpikelensError):
    pass


# edges
class EmptyImage(SpikelensError):
    pass


class InvalidThresholds(SpikelensError):
    pass


# signals
class EmptyDataset(SpikelensError):
    pass


# codec
class SignalTooShort(SpikelensError):
    pass


class EmptySignal(SpikelensError):
    pass


class NonPositiveThreshold(SpikelensError):
    pass


class CountMismatch(SpikelensError):
    pass


class InvalidSpikeTrain(SpikelensError):
    pass


# metrics
class LengthMismatch(SpikelensError):
    pass


class ZeroSignalPower(SpikelensError):
    pass


class EmptyTrain(SpikelensError):
    pass


class UndefinedFitness(SpikelensError):
    pass


# sweep
class NoFiniteCell(SpikelensError):
    pass
