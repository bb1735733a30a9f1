# Verification suite package
