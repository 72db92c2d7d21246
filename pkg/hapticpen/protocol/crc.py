"""CRC-8 with polynomial 0x07, init 0x00, MSB first, no reflection, no final XOR."""

POLYNOMIAL = 0x07


def _build_table(polynomial: int) -> bytes:
    table = bytearray(256)
    for i in range(256):
        crc = i
        for _ in range(8):
            crc = ((crc << 1) ^ polynomial) & 0xFF if crc & 0x80 else (crc << 1) & 0xFF
        table[i] = crc
    return bytes(table)


_TABLE = _build_table(POLYNOMIAL)


def crc8(data: bytes, initial: int = 0x00) -> int:
    crc = initial
    for byte in data:
        crc = _TABLE[crc ^ byte]
    return crc
