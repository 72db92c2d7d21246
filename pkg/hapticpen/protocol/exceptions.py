"""Protocol and transport exceptions"""


class ProtocolError(Exception):
    pass


class FrameTooLargeError(ProtocolError):
    pass


class UndefinedOpcodeError(ProtocolError):
    pass


class PayloadLayoutError(ProtocolError):
    pass


class CommunicationError(ProtocolError):
    pass


class NoReplyError(ProtocolError):
    pass


class NakError(ProtocolError):
    def __init__(self, message, opcode):
        self.opcode = opcode
        super().__init__(message)
