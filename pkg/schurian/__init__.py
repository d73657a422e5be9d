# Schurian category toolkit package
